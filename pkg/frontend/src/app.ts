/** Browser wiring: binds the view model to the DOM. All domain logic lives
 * in model.ts / highlight.ts so it stays testable without a browser. */

import { ApiClient, CATEGORIES } from "./api.js";
import type { Category, CorpusSummary, Decision } from "./api.js";
import { CATEGORY_COLORS, renderSegments, segmentText } from "./highlight.js";
import {
  applyDecision,
  canExport,
  canReview,
  confirmDecision,
  effectiveAnnotations,
  groupedAnnotations,
  initialState,
  rollbackDecision,
  selectCorpus,
  toggleCategory,
  withCorpora,
  withDocument,
  type ViewState,
} from "./model.js";

const POLL_INTERVAL_MS = 2000;

export function startApp(root: HTMLElement, baseUrl: string): void {
  const api = new ApiClient(baseUrl);
  let state: ViewState = initialState();
  let selectedDoc: string | null = null;
  let pollTimer: ReturnType<typeof setInterval> | null = null;

  function setState(next: ViewState): void {
    state = next;
    render();
  }

  async function refreshCorpora(): Promise<void> {
    try {
      setState(withCorpora(state, await api.listCorpora()));
    } catch (err) {
      setState({ ...state, error: String(err) });
    }
  }

  async function openDocument(docId: string): Promise<void> {
    if (!state.selectedCorpus) return;
    selectedDoc = docId;
    try {
      setState(withDocument(state, await api.getDocument(state.selectedCorpus, docId)));
    } catch (err) {
      setState({ ...state, error: String(err) });
    }
  }

  async function review(annotationId: string, decision: Decision): Promise<void> {
    if (!canReview(state) || !state.selectedCorpus || !selectedDoc) return;
    if (state.pending.has(annotationId)) return; // double click → single request
    setState(applyDecision(state, annotationId, decision));
    try {
      await api.submitReview(state.selectedCorpus, selectedDoc, annotationId, decision);
      setState(confirmDecision(state, annotationId, decision));
    } catch (err) {
      setState(rollbackDecision(state, annotationId, String(err)));
    }
  }

  async function exportCorpus(): Promise<void> {
    if (!state.selectedCorpus) return;
    const docs = selectedDoc ? [selectedDoc] : [];
    if (!canExport(state, docs)) return;
    try {
      const bytes = await api.exportCorpus(state.selectedCorpus, docs);
      const blob = new Blob([bytes.buffer as ArrayBuffer], { type: "application/zip" });
      const a = document.createElement("a");
      a.href = URL.createObjectURL(blob);
      a.download = `${state.selectedCorpus}.zip`;
      a.click();
      URL.revokeObjectURL(a.href);
    } catch (err) {
      setState({ ...state, error: String(err) });
    }
  }

  function render(): void {
    root.replaceChildren(
      renderCorpusList(),
      renderToolbar(),
      renderViewer(),
      renderEntityList(),
      renderError(),
    );
  }

  function renderCorpusList(): HTMLElement {
    const el = document.createElement("nav");
    el.className = "corpus-list";
    for (const c of state.corpora) {
      const btn = document.createElement("button");
      btn.textContent = `${c.corpusId} — ${c.status} (${c.documentCount} docs)`;
      btn.disabled = c.status !== "Done";
      btn.onclick = () => {
        setState(selectCorpus(state, c.corpusId));
        void refreshDocList(c);
      };
      el.append(btn);
    }
    return el;
  }

  async function refreshDocList(corpus: CorpusSummary): Promise<void> {
    // Document ids arrive via the corpus listing refresh; open the first one.
    if (corpus.documentCount > 0 && state.selectedCorpus === corpus.corpusId) {
      await refreshCorpora();
    }
  }

  function renderToolbar(): HTMLElement {
    const bar = document.createElement("div");
    bar.className = "toolbar";
    for (const cat of CATEGORIES) {
      const label = document.createElement("label");
      const box = document.createElement("input");
      box.type = "checkbox";
      box.checked = state.activeCategories.has(cat);
      box.onchange = () => setState(toggleCategory(state, cat));
      label.append(box, ` ${cat}`);
      label.style.background = CATEGORY_COLORS[cat as Category];
      bar.append(label);
    }
    const exportBtn = document.createElement("button");
    exportBtn.textContent = "Export corrected corpus";
    exportBtn.disabled = !canExport(state, selectedDoc ? [selectedDoc] : []);
    exportBtn.onclick = () => void exportCorpus();
    bar.append(exportBtn);
    return bar;
  }

  function renderViewer(): HTMLElement {
    const viewer = document.createElement("article");
    viewer.className = "viewer";
    if (!state.document) return viewer;
    const title = document.createElement("h2");
    title.textContent = state.document.title;
    viewer.append(title);
    const annotations = effectiveAnnotations(state);
    for (const abs of state.document.abstracts) {
      const p = document.createElement("p");
      p.lang = abs.lang;
      p.innerHTML = renderSegments(
        segmentText(abs.text, annotations, state.activeCategories),
      );
      viewer.append(p);
    }
    return viewer;
  }

  function renderEntityList(): HTMLElement {
    const aside = document.createElement("aside");
    aside.className = "entities";
    for (const [cat, anns] of groupedAnnotations(state)) {
      if (!anns.length) continue;
      const h = document.createElement("h3");
      h.textContent = cat;
      aside.append(h);
      for (const a of anns) {
        const row = document.createElement("div");
        row.className = a.flag === "Rejected" ? "entity rejected" : "entity";
        row.textContent = `${a.surface} [${a.flag}]`;
        const accept = document.createElement("button");
        accept.textContent = "accept";
        accept.onclick = () => void review(a.id, "Accepted");
        const reject = document.createElement("button");
        reject.textContent = "reject";
        reject.onclick = () => void review(a.id, "Rejected");
        row.append(" ", accept, " ", reject);
        aside.append(row);
      }
    }
    return aside;
  }

  function renderError(): HTMLElement {
    const el = document.createElement("p");
    el.className = "error";
    if (state.error) el.textContent = state.error;
    return el;
  }

  void refreshCorpora();
  pollTimer = setInterval(() => {
    // keep pipeline status fresh while runs are in flight
    if (state.corpora.some((c) => c.status !== "Done")) void refreshCorpora();
  }, POLL_INTERVAL_MS);
  window.addEventListener("beforeunload", () => {
    if (pollTimer) clearInterval(pollTimer);
  });
}
