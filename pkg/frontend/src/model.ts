/** View model for the review workflow.
 *
 * State is a pure function of (server payloads, pending local decisions):
 * reducers never mutate, and reloading the same payloads reconstructs the
 * identical view. Category toggles only change which highlights are shown;
 * they never touch review flags. */

import type {
  Annotation,
  Category,
  CorpusSummary,
  Decision,
  DocumentPayload,
  Flag,
} from "./api.js";
import { CATEGORIES } from "./api.js";

export interface ViewState {
  corpora: readonly CorpusSummary[];
  selectedCorpus: string | null;
  document: DocumentPayload | null;
  activeCategories: ReadonlySet<Category>;
  /** Optimistic decisions awaiting server acknowledgement. */
  pending: ReadonlyMap<string, Decision>;
  error: string | null;
}

export function initialState(): ViewState {
  return {
    corpora: [],
    selectedCorpus: null,
    document: null,
    activeCategories: new Set(CATEGORIES),
    pending: new Map(),
    error: null,
  };
}

export function withCorpora(state: ViewState, corpora: CorpusSummary[]): ViewState {
  return { ...state, corpora };
}

export function selectCorpus(state: ViewState, corpusId: string): ViewState {
  const corpus = state.corpora.find((c) => c.corpusId === corpusId);
  if (!corpus) return { ...state, error: `unknown corpus ${corpusId}` };
  return { ...state, selectedCorpus: corpusId, document: null, pending: new Map(), error: null };
}

export function withDocument(state: ViewState, doc: DocumentPayload): ViewState {
  return { ...state, document: doc, pending: new Map(), error: null };
}

export function toggleCategory(state: ViewState, category: Category): ViewState {
  const next = new Set(state.activeCategories);
  if (next.has(category)) next.delete(category);
  else next.add(category);
  return { ...state, activeCategories: next };
}

/** Review mutations are only possible once the corpus run is Done. */
export function canReview(state: ViewState): boolean {
  const corpus = state.corpora.find((c) => c.corpusId === state.selectedCorpus);
  return corpus?.status === "Done" && state.document !== null;
}

/** Optimistic flag application; the server ack (or rollback) follows. */
export function applyDecision(
  state: ViewState,
  annotationId: string,
  decision: Decision,
): ViewState {
  if (!canReview(state)) {
    return { ...state, error: "corpus is not ready for review" };
  }
  const pending = new Map(state.pending);
  pending.set(annotationId, decision);
  return { ...state, pending, error: null };
}

/** Server acknowledged: fold the decision into the document payload. */
export function confirmDecision(
  state: ViewState,
  annotationId: string,
  decision: Decision,
): ViewState {
  if (!state.document) return state;
  const pending = new Map(state.pending);
  pending.delete(annotationId);
  const annotations = state.document.annotations.map((a) =>
    a.id === annotationId ? { ...a, flag: decision } : a,
  );
  return { ...state, pending, document: { ...state.document, annotations } };
}

/** Server refused: drop the optimistic flag and surface the error. */
export function rollbackDecision(
  state: ViewState,
  annotationId: string,
  message: string,
): ViewState {
  const pending = new Map(state.pending);
  pending.delete(annotationId);
  return { ...state, pending, error: message };
}

/** Annotations with optimistic decisions overlaid — what the viewer shows. */
export function effectiveAnnotations(state: ViewState): Annotation[] {
  if (!state.document) return [];
  return state.document.annotations.map((a) => {
    const pendingFlag = state.pending.get(a.id);
    return pendingFlag ? { ...a, flag: pendingFlag as Flag } : a;
  });
}

/** Entity list grouped by category, in document order within each group. */
export function groupedAnnotations(state: ViewState): Map<Category, Annotation[]> {
  const groups = new Map<Category, Annotation[]>();
  for (const cat of CATEGORIES) groups.set(cat, []);
  for (const a of effectiveAnnotations(state).slice().sort((x, y) => x.start - y.start)) {
    groups.get(a.category)!.push(a);
  }
  return groups;
}

/** Export is enabled only for a Done corpus with a non-empty selection. */
export function canExport(state: ViewState, selection: readonly string[]): boolean {
  const corpus = state.corpora.find((c) => c.corpusId === state.selectedCorpus);
  return corpus?.status === "Done" && selection.length > 0;
}
