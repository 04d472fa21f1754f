/** Dashboard panes. Every pane owns one DOM container, fetches its own data
 * with the complete current filter context, and re-renders on refresh.
 * In-flight responses are tagged with a request sequence number; anything
 * superseded by a newer chip set is discarded instead of rendered. A failed
 * fetch becomes a pane-level error banner and never touches other panes. */

import type {
  ApiClient,
  Filter,
  HeatMapResponse,
  HistogramResponse,
  MetricsResponse,
  TableResponse,
  TagCloudResponse,
} from "./api.js";
import { heatColor, tagFontSize } from "./scaling.js";
import type { DashboardState } from "./state.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export abstract class Pane<T> {
  readonly root: HTMLElement;
  protected readonly body: HTMLElement;
  private seq = 0;

  constructor(
    container: HTMLElement,
    readonly title: string,
    protected readonly client: ApiClient,
    protected readonly state: DashboardState,
  ) {
    this.root = el("section", "pane");
    this.root.append(el("h3", "pane-title", title));
    this.body = el("div", "pane-body");
    this.root.append(this.body);
    container.append(this.root);
  }

  async refresh(): Promise<void> {
    const mySeq = ++this.seq;
    const hint = this.gate();
    if (hint !== null) {
      this.body.replaceChildren(el("div", "empty gated", hint));
      return;
    }
    try {
      const data = await this.fetchData();
      if (mySeq !== this.seq) return; // superseded by a newer context
      this.body.replaceChildren();
      this.render(data);
    } catch (err) {
      if (mySeq !== this.seq) return;
      this.body.replaceChildren(
        el("div", "pane-error", `failed to load: ${(err as Error).message}`),
      );
    }
  }

  /** Non-null return = this pane cannot query yet; render the hint instead
   * (used by the second-order clouds until a functional type is chosen). */
  protected gate(): string | null {
    return null;
  }

  protected abstract fetchData(): Promise<T>;
  protected abstract render(data: T): void;
}

export interface TagCloudOptions {
  field: string;
  /** Field the chip filters on when a term is clicked; defaults to the
   * facet itself. Role clouds chip the underlying subject/object. */
  chipField?: string;
  k?: number;
  /** Pane-local constraints (e.g. the KG gene-semantic-type cloud is fixed
   * to chemical-gene relations) that are not user chips. */
  extraFilters?: Filter[];
  /** Stay idle until a chip on this field exists (second-order clouds are
   * only defined once a functional type is selected). */
  requireChip?: string;
}

export class TagCloudPane extends Pane<TagCloudResponse> {
  private readonly options: Required<Pick<TagCloudOptions, "field" | "chipField" | "k">> &
    TagCloudOptions;

  constructor(
    container: HTMLElement,
    title: string,
    client: ApiClient,
    state: DashboardState,
    options: TagCloudOptions,
  ) {
    super(container, title, client, state);
    this.options = {
      ...options,
      chipField: options.chipField ?? options.field,
      k: options.k ?? 30,
    };
  }

  protected gate(): string | null {
    const needed = this.options.requireChip;
    if (needed && !this.state.allChips().some((c) => c.field === needed)) {
      return `select a ${needed.replace("_", " ")} first`;
    }
    return null;
  }

  protected fetchData(): Promise<TagCloudResponse> {
    return this.client.tagCloud(
      this.state.context(),
      this.options.field,
      this.options.k,
      this.options.extraFilters ?? [],
    );
  }

  protected render(data: TagCloudResponse): void {
    if (data.terms.length === 0) {
      this.body.append(el("div", "empty", "no terms"));
      return;
    }
    const max = data.terms[0].count;
    const cloud = el("div", "tag-cloud");
    for (const { term, count } of data.terms) {
      const tag = el("button", "tag", term);
      tag.style.fontSize = `${tagFontSize(count, max)}px`;
      tag.title = `${term}: ${count}`;
      tag.addEventListener("click", () => {
        this.state.addChip(this.options.chipField, term);
      });
      cloud.append(tag);
    }
    this.body.append(cloud);
  }
}

export class HeatMapPane extends Pane<HeatMapResponse> {
  constructor(
    container: HTMLElement,
    title: string,
    client: ApiClient,
    state: DashboardState,
    private readonly x: string,
    private readonly y: string,
    private readonly kx = 10,
    private readonly ky = 10,
  ) {
    super(container, title, client, state);
  }

  protected fetchData(): Promise<HeatMapResponse> {
    return this.client.heatMap(this.state.context(), this.x, this.y, this.kx, this.ky);
  }

  protected render(data: HeatMapResponse): void {
    if (data.cells.length === 0) {
      this.body.append(el("div", "empty", "empty matrix"));
      return;
    }
    const max = Math.max(...data.cells.flat());
    const table = el("table", "heat-map");
    const head = el("tr");
    head.append(el("th"));
    for (const x of data.x_terms) head.append(el("th", "heat-x", x));
    table.append(head);
    data.y_terms.forEach((yTerm, i) => {
      const row = el("tr");
      row.append(el("th", "heat-y", yTerm));
      data.cells[i].forEach((count, j) => {
        const cell = el("td", "heat-cell", count ? String(count) : "");
        cell.style.backgroundColor = heatColor(count, max);
        cell.title = `${data.x_terms[j]} x ${yTerm}: ${count}`;
        if (count > 0) {
          // one atomic state change: both chips land before any pane refreshes
          cell.addEventListener("click", () => {
            this.state.addChips([
              { field: this.x, term: data.x_terms[j] },
              { field: this.y, term: yTerm },
            ]);
          });
        }
        row.append(cell);
      });
      table.append(row);
    });
    this.body.append(table);
  }
}

export class TablePane extends Pane<TableResponse> {
  private page = 0;

  constructor(
    container: HTMLElement,
    title: string,
    client: ApiClient,
    state: DashboardState,
    private readonly pageSize = 10,
  ) {
    super(container, title, client, state);
    state.subscribe(() => {
      this.page = 0; // a changed context invalidates the page position
    });
  }

  protected fetchData(): Promise<TableResponse> {
    return this.client.table(this.state.context(), this.page, this.pageSize);
  }

  protected render(data: TableResponse): void {
    const table = el("table", "evidence-table");
    const head = el("tr");
    for (const column of ["Evidence sentence", "Subject", "Relation", "Object", "Source"]) {
      head.append(el("th", undefined, column));
    }
    table.append(head);
    for (const row of data.rows) {
      const tr = el("tr", "evidence-row");
      tr.append(el("td", "sentence", row.sentence));
      tr.append(el("td", undefined, row.subject));
      tr.append(el("td", undefined, row.relation));
      tr.append(el("td", undefined, row.object));
      const source = el("td");
      if (row.url) {
        const link = el("a", "provenance", row.pmid ?? "source");
        link.setAttribute("href", row.url);
        link.setAttribute("target", "_blank");
        source.append(link);
      } else {
        source.textContent = "-";
      }
      tr.append(source);
      table.append(tr);
    }
    this.body.append(table);

    const pager = el("div", "pager");
    const pages = Math.max(1, Math.ceil(data.total / data.page_size));
    const prev = el("button", "page-prev", "prev");
    const next = el("button", "page-next", "next");
    prev.disabled = data.page === 0;
    next.disabled = data.page >= pages - 1;
    prev.addEventListener("click", () => {
      this.page = Math.max(0, this.page - 1);
      void this.refresh();
    });
    next.addEventListener("click", () => {
      this.page += 1;
      void this.refresh();
    });
    pager.append(prev, el("span", "page-label", `page ${data.page + 1} / ${pages}`), next);
    pager.append(el("span", "total-label", `${data.total} evidence docs`));
    this.body.append(pager);
  }
}

export class MetricsPane extends Pane<MetricsResponse> {
  protected fetchData(): Promise<MetricsResponse> {
    return this.client.metrics(this.state.context());
  }

  protected render(data: MetricsResponse): void {
    const wrap = el("div", "metrics");
    for (const [label, value] of [
      ["evidence docs", data.evidence_count],
      ["articles", data.article_count],
    ] as const) {
      const metric = el("div", "metric");
      metric.append(el("div", "metric-value", String(value)));
      metric.append(el("div", "metric-label", label));
      wrap.append(metric);
    }
    this.body.append(wrap);
  }
}

export class HistogramPane extends Pane<HistogramResponse> {
  constructor(
    container: HTMLElement,
    title: string,
    client: ApiClient,
    state: DashboardState,
    private readonly granularity: "month" | "year" = "month",
  ) {
    super(container, title, client, state);
  }

  protected fetchData(): Promise<HistogramResponse> {
    return this.client.histogram(this.state.context(), this.granularity);
  }

  protected render(data: HistogramResponse): void {
    if (data.buckets.length === 0) {
      this.body.append(el("div", "empty", "no dated documents"));
      return;
    }
    const max = Math.max(...data.buckets.map((b) => b.count));
    const chart = el("div", "histogram");
    for (const { bucket, count } of data.buckets) {
      const column = el("div", "bar-column");
      const bar = el("div", "bar");
      bar.style.height = `${Math.round((100 * count) / max)}px`;
      bar.title = `${bucket}: ${count}`;
      column.append(bar, el("div", "bar-label", bucket));
      chart.append(column);
    }
    this.body.append(chart);
  }
}
