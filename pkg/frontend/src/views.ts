/** The two aggregation dashboards. Panes share one DashboardState, so a
 * click anywhere re-scopes every visualization on the page. */

import type { ApiClient } from "./api.js";
import {
  HeatMapPane,
  HistogramPane,
  MetricsPane,
  Pane,
  TablePane,
  TagCloudPane,
} from "./panes.js";
import type { DashboardState } from "./state.js";

export interface ViewHandle {
  panes: Pane<unknown>[];
  refreshAll(): Promise<void>;
}

function wire(panes: Pane<unknown>[]): ViewHandle {
  return {
    panes,
    refreshAll: async () => {
      await Promise.all(panes.map((pane) => pane.refresh()));
    },
  };
}

/** Causal-assertion view: role clouds, interaction heat maps, functional
 * types with their upstream/opposite-upstream second-order clouds. */
export function buildCaDashboard(
  root: HTMLElement,
  client: ApiClient,
  state: DashboardState,
): ViewHandle {
  const panes: Pane<unknown>[] = [
    new MetricsPane(root, "Indexed evidence", client, state),
    new TagCloudPane(root, "Subject proteins in regulations", client, state, {
      field: "role_subject",
      chipField: "subject",
    }),
    new TagCloudPane(root, "Object proteins in regulations", client, state, {
      field: "role_object",
      chipField: "object",
    }),
    new TagCloudPane(root, "Enzyme proteins participating Modification relations",
      client, state, { field: "role_enzyme", chipField: "subject" }),
    new TagCloudPane(root, "Substrate proteins in modifications", client, state, {
      field: "role_substrate",
      chipField: "object",
    }),
    new HeatMapPane(root, "Subject-Object interactions", client, state,
      "subject", "object"),
    new HeatMapPane(root, "Enzyme-Substrate interactions", client, state,
      "role_enzyme", "role_substrate"),
    new TagCloudPane(root, "Functional types", client, state, {
      field: "functional_type",
    }),
    new TagCloudPane(root, "Upstream regulators", client, state, {
      field: "upstream_regulator",
      chipField: "subject",
      requireChip: "functional_type",
    }),
    new TagCloudPane(root, "Opposite upstream regulators", client, state, {
      field: "opposite_upstream_regulator",
      chipField: "subject",
      requireChip: "functional_type",
    }),
    new HeatMapPane(root, "Abstract keyword - journal relations", client, state,
      "abstract_keyword", "journal", 12, 8),
    new HistogramPane(root, "Evidence by publish month", client, state),
    new TablePane(root, "Evidence sentences and PubMed URL", client, state),
  ];
  return wire(panes);
}

/** Knowledge-graph view: the two linked sub-relation heat maps, entity
 * clouds, and the grounded gene semantic types. */
export function buildKgDashboard(
  root: HTMLElement,
  client: ApiClient,
  state: DashboardState,
): ViewHandle {
  const panes: Pane<unknown>[] = [
    new MetricsPane(root, "Indexed evidence", client, state),
    new TagCloudPane(root, "Chemicals", client, state, { field: "chemical" }),
    new TagCloudPane(root, "Genes", client, state, { field: "gene" }),
    new TagCloudPane(root, "Diseases", client, state, { field: "disease" }),
    new HeatMapPane(root, "Chemical-Gene sub-relations", client, state,
      "chemical", "gene"),
    new HeatMapPane(root, "Gene-Disease sub-relations", client, state,
      "gene", "disease"),
    new TagCloudPane(root, "Gene semantic types", client, state, {
      field: "functional_type",
      extraFilters: [{ field: "pair_kind", term: "chemical_gene" }],
    }),
    new TablePane(root, "Evidence sentences and PubMed URL", client, state),
  ];
  return wire(panes);
}
