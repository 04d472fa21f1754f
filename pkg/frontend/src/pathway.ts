/** Pathway browser: search a target entity, see its top activators and the
 * proteins activating those activators, then drill into individual
 * pathways with evidence for the first regulatory relation. */

import type { ApiClient, PathwaysResponse, RankedEntity } from "./api.js";
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

const POLARITY_GLYPH: Record<string, string> = {
  increase: "++",
  decrease: "--",
  affect: "→",
};

export class PathwayBrowser {
  readonly root: HTMLElement;
  private readonly columns: HTMLElement;
  private readonly detail: HTMLElement;
  private readonly status: HTMLElement;
  private readonly input: HTMLInputElement;
  private seq = 0;

  constructor(
    container: HTMLElement,
    private readonly client: ApiClient,
    private readonly state: DashboardState,
  ) {
    this.root = el("section", "pathway-browser");
    const form = el("form", "pathway-search");
    this.input = el("input");
    this.input.className = "pathway-target";
    this.input.setAttribute("placeholder", "protein name, e.g. MAVS");
    this.input.value = state.pathwayTarget;
    const button = el("button", "pathway-go", "Search");
    button.setAttribute("type", "submit");
    form.append(this.input, button);
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      this.state.pathwayTarget = this.input.value.trim();
      void this.search();
    });
    this.status = el("div", "pathway-status");
    this.columns = el("div", "pathway-columns");
    this.detail = el("div", "pathway-detail");
    this.root.append(form, this.status, this.columns, this.detail);
    container.append(this.root);
  }

  async search(): Promise<void> {
    const target = this.state.pathwayTarget;
    this.columns.replaceChildren();
    this.detail.replaceChildren();
    if (!target) {
      this.status.textContent = "enter a protein name to explore its regulators";
      return;
    }
    const mySeq = ++this.seq;
    this.status.textContent = `searching ${target}...`;
    let data: PathwaysResponse;
    try {
      data = await this.client.pathways(target, { k: 10 });
    } catch (err) {
      if (mySeq === this.seq) {
        this.status.textContent = `failed to load: ${(err as Error).message}`;
      }
      return;
    }
    if (mySeq !== this.seq) return;
    if (data.regulators.length === 0) {
      this.status.textContent = `no regulators found for ${target}`;
      return;
    }
    this.status.textContent =
      `${data.target_display}: search depth ${data.effective_depth}, ` +
      `${data.walk_estimate} walks estimated`;
    this.columns.append(
      this.rankedColumn(`${data.target_display} activators`, data.regulators, false),
      this.rankedColumn("Upstream regulators", data.upstream, true),
    );
  }

  private rankedColumn(
    title: string,
    entries: RankedEntity[],
    upstream: boolean,
  ): HTMLElement {
    const column = el("div", upstream ? "column upstream" : "column members");
    column.append(el("h4", undefined, title));
    const list = el("ol", "ranked");
    for (const entry of entries) {
      const item = el("li");
      const link = el("button", "entity", `${entry.display} (${entry.count})`);
      if (upstream) {
        link.addEventListener("click", () => void this.showPathways(entry));
      }
      item.append(link);
      list.append(item);
    }
    column.append(list);
    return column;
  }

  /** List the individual pathways from a selected upstream regulator down
   * to the target, with evidence for the first edge of each. */
  private async showPathways(entry: RankedEntity): Promise<void> {
    const mySeq = ++this.seq;
    let data: PathwaysResponse;
    try {
      data = await this.client.pathways(this.state.pathwayTarget, {
        start: entry.entity,
        k: 10,
      });
    } catch (err) {
      if (mySeq === this.seq) {
        this.detail.replaceChildren(
          el("div", "pane-error", `failed to load: ${(err as Error).message}`),
        );
      }
      return;
    }
    if (mySeq !== this.seq) return;
    this.detail.replaceChildren();
    this.detail.append(
      el("h4", undefined,
         `Pathways from ${entry.display} to ${data.target_display}`));
    if (data.pathways.length === 0) {
      this.detail.append(el("div", "empty", "no pathways"));
      return;
    }
    for (const pathway of data.pathways) {
      const card = el("div", "pathway-card");
      const glyph = POLARITY_GLYPH[pathway.net_polarity] ?? pathway.net_polarity;
      card.append(
        el("div", "pathway-nodes",
           `${pathway.nodes.join(" → ")}  [net ${glyph}]`));
      const evidence = el("ul", "first-edge-evidence");
      for (const doc of pathway.first_edge_evidence ?? []) {
        const item = el("li", "evidence-item");
        item.append(el("span", "evidence-sentence", doc.sentence + " "));
        if (doc.url) {
          const link = el("a", "provenance", doc.pmid ?? "source");
          link.setAttribute("href", doc.url);
          link.setAttribute("target", "_blank");
          item.append(link);
        }
        evidence.append(item);
      }
      card.append(evidence);
      this.detail.append(card);
    }
  }
}
