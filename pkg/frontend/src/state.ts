// Client-side view state. Selection and breadcrumbs are the only things the
// client owns; cluster contents always come verbatim from the service.

import type { ClusterCard, Metrics, ProjectionPoint, SessionState } from "./types.js";

export interface BreadcrumbEntry {
  generation: number;
  label: string;
}

export interface ViewState {
  sessionId: string;
  generation: number;
  cards: ClusterCard[];
  selected: ReadonlySet<string>;
  breadcrumbs: BreadcrumbEntry[]; // always history_depth entries
  historyDepth: number;
  metrics: Metrics | null;
  projection: ProjectionPoint[];
  banner: string | null;
}

function syntheticTrail(depth: number): BreadcrumbEntry[] {
  return Array.from({ length: depth }, (_, i) => ({
    generation: i + 1,
    label: `step ${i + 1}`,
  }));
}

/** Build the next view from a session payload.
 *
 * Breadcrumbs reconcile against the previous view: a gather appends one
 * entry, a back pops one, anything else (fresh load, refresh after restart)
 * synthesizes a trail of the right length. Selections never survive a
 * generation change.
 */
export function viewFromSession(
  session: SessionState,
  prev?: ViewState,
  stepLabel?: string,
): ViewState {
  let breadcrumbs: BreadcrumbEntry[];
  if (prev && session.history_depth === prev.breadcrumbs.length + 1) {
    breadcrumbs = [
      ...prev.breadcrumbs,
      {
        generation: prev.generation,
        label: stepLabel ?? `gathered ${prev.selected.size || 1} of ${prev.cards.length}`,
      },
    ];
  } else if (prev && session.history_depth === prev.breadcrumbs.length - 1) {
    breadcrumbs = prev.breadcrumbs.slice(0, -1);
  } else if (prev && session.history_depth === prev.breadcrumbs.length) {
    breadcrumbs = prev.breadcrumbs;
  } else {
    breadcrumbs = syntheticTrail(session.history_depth);
  }

  return {
    sessionId: session.session_id,
    generation: session.generation,
    cards: session.clusters,
    selected: new Set<string>(),
    breadcrumbs,
    historyDepth: session.history_depth,
    metrics: session.metrics,
    projection: session.projection ?? [],
    banner: null,
  };
}

/** Toggle a card; ids not in the current generation are ignored. */
export function toggleSelection(view: ViewState, clusterId: string): ViewState {
  if (!view.cards.some((c) => c.id === clusterId)) {
    return view;
  }
  const selected = new Set(view.selected);
  if (selected.has(clusterId)) {
    selected.delete(clusterId);
  } else {
    selected.add(clusterId);
  }
  return { ...view, selected };
}

export function canGather(view: ViewState): boolean {
  return view.selected.size >= 1;
}

export function canGoBack(view: ViewState): boolean {
  return view.historyDepth >= 1;
}

export function selectedSizeSum(view: ViewState): number {
  return view.cards
    .filter((c) => view.selected.has(c.id))
    .reduce((total, c) => total + c.size, 0);
}

export function withBanner(view: ViewState, banner: string | null): ViewState {
  return { ...view, banner };
}
