/** Application shell: view tabs, search box, the chip bar, and URL sync.
 * All pane refreshes flow from DashboardState change notifications. */

import { ApiClient } from "./api.js";
import { PathwayBrowser } from "./pathway.js";
import { DashboardState, type View } from "./state.js";
import { buildCaDashboard, buildKgDashboard, type ViewHandle } from "./views.js";

const VIEW_LABELS: Record<View, string> = {
  ca: "Causal assertions",
  kg: "Knowledge graphs",
  pathways: "Pathways",
};

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

export interface App {
  state: DashboardState;
  refresh(): Promise<void>;
}

export function bootstrap(
  root: HTMLElement,
  client: ApiClient,
  state = DashboardState.fromQueryString(
    typeof location !== "undefined" ? location.search : "",
  ),
): App {
  root.replaceChildren();

  const header = el("header", "topbar");
  const tabs = el("nav", "tabs");
  const tabButtons = new Map<View, HTMLButtonElement>();
  for (const view of ["ca", "kg", "pathways"] as View[]) {
    const tab = el("button", "tab", VIEW_LABELS[view]);
    tab.addEventListener("click", () => state.setView(view));
    tabButtons.set(view, tab);
    tabs.append(tab);
  }
  const search = el("form", "search");
  const searchInput = el("input");
  searchInput.className = "search-input";
  searchInput.setAttribute("placeholder", "free-text query");
  searchInput.value = state.text;
  search.append(searchInput);
  search.addEventListener("submit", (event) => {
    event.preventDefault();
    state.setText(searchInput.value);
  });
  header.append(tabs, search);

  const chipBar = el("div", "chip-bar");
  const viewRoots = new Map<View, HTMLElement>();
  const container = el("main", "views");
  for (const view of ["ca", "kg", "pathways"] as View[]) {
    const viewRoot = el("div", `view view-${view}`);
    viewRoots.set(view, viewRoot);
    container.append(viewRoot);
  }
  root.append(header, chipBar, container);

  const handles = new Map<View, ViewHandle>();
  handles.set("ca", buildCaDashboard(viewRoots.get("ca")!, client, state));
  handles.set("kg", buildKgDashboard(viewRoots.get("kg")!, client, state));
  const browser = new PathwayBrowser(viewRoots.get("pathways")!, client, state);

  function renderChips(): void {
    chipBar.replaceChildren();
    for (const chip of state.allChips()) {
      const node = el("span", "chip");
      node.append(el("span", "chip-label", `${chip.field}: ${chip.term}`));
      const remove = el("button", "chip-remove", "×");
      remove.setAttribute("aria-label", `remove ${chip.field} ${chip.term}`);
      remove.addEventListener("click", () => state.removeChip(chip.field, chip.term));
      node.append(remove);
      chipBar.append(node);
    }
    if (state.allChips().length > 0) {
      const clear = el("button", "chip-clear", "clear all");
      clear.addEventListener("click", () => state.clearChips());
      chipBar.append(clear);
    }
  }

  function showActiveView(): void {
    for (const [view, viewRoot] of viewRoots) {
      viewRoot.style.display = view === state.view ? "" : "none";
      tabButtons.get(view)!.classList.toggle("active", view === state.view);
    }
  }

  function syncUrl(): void {
    try {
      history.replaceState(null, "", `?${state.toQueryString()}`);
    } catch {
      // non-browser host (tests); URL sync is cosmetic there
    }
  }

  async function refresh(): Promise<void> {
    renderChips();
    showActiveView();
    syncUrl();
    const handle = handles.get(state.view);
    if (handle) await handle.refreshAll();
  }

  state.subscribe(() => void refresh());
  renderChips();
  showActiveView();
  if (state.view !== "pathways") {
    void handles.get(state.view)!.refreshAll();
  } else if (state.pathwayTarget) {
    void browser.search();
  }
  return { state, refresh };
}
