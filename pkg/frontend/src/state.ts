/** Dashboard state: the set of active filter chips plus the free-text query.
 *
 * The chip set mirrors exactly the filter context sent with every pane
 * request, and the whole state round-trips through the URL query string so
 * exploration states are shareable and bookmarkable. */

import type { Filter } from "./api.js";

export type View = "ca" | "kg" | "pathways";

export interface Chip extends Filter {}

export type Listener = () => void;

const CHIP_SEP = ":";

export class DashboardState {
  private chips: Chip[] = [];
  private textQuery = "";
  private currentView: View = "ca";
  private listeners: Listener[] = [];

  /** Pathway-browser params live here too so they survive URL round-trips. */
  pathwayTarget = "";

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private notify(): void {
    for (const listener of [...this.listeners]) listener();
  }

  get view(): View {
    return this.currentView;
  }

  setView(view: View): void {
    if (view === this.currentView) return;
    this.currentView = view;
    this.notify();
  }

  get text(): string {
    return this.textQuery;
  }

  setText(query: string): void {
    const clean = query.trim();
    if (clean === this.textQuery) return;
    this.textQuery = clean;
    this.notify();
  }

  allChips(): readonly Chip[] {
    return this.chips;
  }

  hasChip(field: string, term: string): boolean {
    return this.chips.some((c) => c.field === field && c.term === term);
  }

  /** Add one chip; a chip already present is a no-op (no refresh storm). */
  addChip(field: string, term: string): boolean {
    return this.addChips([{ field, term }]);
  }

  /** Add several chips atomically: one state change, one round of pane
   * refreshes (heat-map cells add their x and y chips together). */
  addChips(chips: Chip[]): boolean {
    const fresh = chips.filter((c) => !this.hasChip(c.field, c.term));
    if (fresh.length === 0) return false;
    this.chips = [...this.chips, ...fresh];
    this.notify();
    return true;
  }

  removeChip(field: string, term: string): boolean {
    const kept = this.chips.filter((c) => !(c.field === field && c.term === term));
    if (kept.length === this.chips.length) return false;
    this.chips = kept;
    this.notify();
    return true;
  }

  clearChips(): void {
    if (this.chips.length === 0) return;
    this.chips = [];
    this.notify();
  }

  /** The exact filter context every pane request must carry. */
  context(): { filters: Filter[]; text?: string } {
    const filters = this.chips.map(({ field, term }) => ({ field, term }));
    return this.textQuery ? { filters, text: this.textQuery } : { filters };
  }

  toQueryString(): string {
    const params = new URLSearchParams();
    params.set("view", this.currentView);
    if (this.textQuery) params.set("q", this.textQuery);
    for (const chip of this.chips) {
      params.append("f", `${chip.field}${CHIP_SEP}${encodeURIComponent(chip.term)}`);
    }
    if (this.pathwayTarget) params.set("target", this.pathwayTarget);
    return params.toString();
  }

  static fromQueryString(query: string): DashboardState {
    const state = new DashboardState();
    const params = new URLSearchParams(query);
    const view = params.get("view");
    if (view === "ca" || view === "kg" || view === "pathways") {
      state.currentView = view;
    }
    state.textQuery = (params.get("q") ?? "").trim();
    state.pathwayTarget = params.get("target") ?? "";
    for (const raw of params.getAll("f")) {
      const sep = raw.indexOf(CHIP_SEP);
      if (sep <= 0) continue;
      const field = raw.slice(0, sep);
      const term = decodeURIComponent(raw.slice(sep + 1));
      if (term && !state.hasChip(field, term)) {
        state.chips.push({ field, term });
      }
    }
    return state;
  }
}
