// Application wiring: one session per tab, every mutation round-trips to the
// service, re-render from the returned payload.

import { ApiClient, ApiRequestError } from "./api.js";
import {
  ViewState,
  canGather,
  canGoBack,
  selectedSizeSum,
  toggleSelection,
  viewFromSession,
  withBanner,
} from "./state.js";
import {
  renderBanner,
  renderBreadcrumbs,
  renderCards,
  renderDocument,
  renderMetrics,
  renderProjection,
} from "./render.js";
import type { SessionState } from "./types.js";

const api = new ApiClient("");
let view: ViewState | null = null;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function redraw(): void {
  const setup = el<HTMLElement>("setup");
  const explorer = el<HTMLElement>("explorer");
  if (view === null) {
    setup.hidden = false;
    explorer.hidden = true;
    return;
  }
  setup.hidden = true;
  explorer.hidden = false;

  el("banner").innerHTML = renderBanner(view.banner);
  el("breadcrumbs").innerHTML = renderBreadcrumbs(view);
  el("cards").innerHTML = renderCards(view);
  el("projection").innerHTML = renderProjection(view.projection);

  const metrics = el("metrics");
  metrics.innerHTML = renderMetrics(view.metrics);
  metrics.hidden = view.metrics === null;

  const gatherButton = el<HTMLButtonElement>("gather");
  gatherButton.disabled = !canGather(view);
  gatherButton.textContent = canGather(view)
    ? `Gather ${view.selected.size} cluster(s) (${selectedSizeSum(view)} docs)`
    : "Gather";
  el<HTMLButtonElement>("back").disabled = !canGoBack(view);
}

function apply(session: SessionState, stepLabel?: string): void {
  view = viewFromSession(session, view ?? undefined, stepLabel);
  redraw();
}

function showError(err: unknown): void {
  if (view === null) {
    el("setup-error").textContent = err instanceof Error ? err.message : String(err);
    return;
  }
  let message = err instanceof Error ? err.message : String(err);
  if (err instanceof ApiRequestError && err.status === 409) {
    message = `${message} — the scatter changed; refresh to continue`;
  }
  view = withBanner(view, message);
  redraw();
}

async function createSession(): Promise<void> {
  const path = el<HTMLInputElement>("corpus-path").value.trim();
  if (!path) return;
  const k = parseInt(el<HTMLInputElement>("cluster-count").value, 10) || 4;
  try {
    const { corpus_id } = await api.registerCorpus(path);
    const session = await api.createSession(corpus_id, {
      selector: { kind: "vcgs", r: 5, p: 0.5 },
      lsa_n: 4,
      algorithm: { kind: "kmeans", k, restarts: 5 },
      subset: "title_abstract_body",
      seed: 0,
    });
    view = null; // fresh trail
    apply(session);
  } catch (err) {
    showError(err);
  }
}

async function submitGather(): Promise<void> {
  if (view === null || !canGather(view)) return;
  const ids = [...view.selected];
  try {
    apply(await api.gather(view.sessionId, ids), `gathered ${ids.length} of ${view.cards.length}`);
  } catch (err) {
    showError(err);
  }
}

async function goBack(): Promise<void> {
  if (view === null || !canGoBack(view)) return;
  try {
    apply(await api.back(view.sessionId));
  } catch (err) {
    showError(err);
  }
}

async function openDocument(docId: string): Promise<void> {
  if (view === null) return;
  try {
    const doc = await api.getDocument(view.sessionId, docId);
    el("document-view").innerHTML = renderDocument(doc);
    el<HTMLDialogElement>("document-dialog").showModal();
  } catch (err) {
    showError(err);
  }
}

function onCardsClick(event: Event): void {
  const target = event.target as HTMLElement;
  const link = target.closest<HTMLElement>(".doc-link");
  if (link?.dataset.docId) {
    event.preventDefault();
    void openDocument(link.dataset.docId);
    return;
  }
  const card = target.closest<HTMLElement>(".card");
  if (card?.dataset.clusterId && view) {
    view = toggleSelection(view, card.dataset.clusterId);
    redraw();
  }
}

export function boot(): void {
  el("create").addEventListener("click", () => void createSession());
  el("gather").addEventListener("click", () => void submitGather());
  el("back").addEventListener("click", () => void goBack());
  el("cards").addEventListener("click", onCardsClick);
  el("document-close").addEventListener("click", () =>
    el<HTMLDialogElement>("document-dialog").close(),
  );
  redraw();
}

boot();
