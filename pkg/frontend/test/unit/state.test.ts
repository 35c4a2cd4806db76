import { describe, expect, it } from "vitest";

import {
  canGather,
  canGoBack,
  selectedSizeSum,
  toggleSelection,
  viewFromSession,
} from "../../src/state.js";
import type { SessionState } from "../../src/types.js";

function session(overrides: Partial<SessionState> = {}): SessionState {
  return {
    session_id: "s1",
    generation: 1,
    clusters: [
      { id: "g1:c0", size: 40, descriptors: [{ term: "alpha", weight: 2 }], samples: [] },
      { id: "g1:c1", size: 60, descriptors: [{ term: "beta", weight: 1 }], samples: [] },
    ],
    metrics: null,
    history_depth: 0,
    projection: [],
    ...overrides,
  };
}

describe("viewFromSession", () => {
  it("starts with nothing selected and an empty trail", () => {
    const view = viewFromSession(session());
    expect(view.selected.size).toBe(0);
    expect(view.breadcrumbs).toHaveLength(0);
    expect(canGather(view)).toBe(false);
    expect(canGoBack(view)).toBe(false);
  });

  it("keeps breadcrumb length equal to history_depth across gather and back", () => {
    let view = viewFromSession(session());
    view = toggleSelection(view, "g1:c0");

    const afterGather = viewFromSession(
      session({ generation: 2, history_depth: 1, clusters: [] }),
      view,
      "gathered 1 of 2",
    );
    expect(afterGather.breadcrumbs).toHaveLength(1);
    expect(afterGather.breadcrumbs[0].label).toBe("gathered 1 of 2");
    expect(canGoBack(afterGather)).toBe(true);

    const afterBack = viewFromSession(session({ history_depth: 0 }), afterGather);
    expect(afterBack.breadcrumbs).toHaveLength(0);
  });

  it("synthesizes a trail when reloading an old session", () => {
    const view = viewFromSession(session({ generation: 4, history_depth: 3 }));
    expect(view.breadcrumbs).toHaveLength(3);
  });

  it("clears selection on every new payload", () => {
    let view = viewFromSession(session());
    view = toggleSelection(view, "g1:c0");
    expect(view.selected.size).toBe(1);
    const next = viewFromSession(session({ generation: 2, history_depth: 1 }), view);
    expect(next.selected.size).toBe(0);
  });
});

describe("toggleSelection", () => {
  it("toggles on and off", () => {
    let view = viewFromSession(session());
    view = toggleSelection(view, "g1:c1");
    expect([...view.selected]).toEqual(["g1:c1"]);
    view = toggleSelection(view, "g1:c1");
    expect(view.selected.size).toBe(0);
  });

  it("ignores ids from another generation", () => {
    let view = viewFromSession(session());
    view = toggleSelection(view, "g0:c9");
    expect(view.selected.size).toBe(0);
  });

  it("sums the selected cluster sizes", () => {
    let view = viewFromSession(session());
    view = toggleSelection(view, "g1:c0");
    view = toggleSelection(view, "g1:c1");
    expect(selectedSizeSum(view)).toBe(100);
  });
});
