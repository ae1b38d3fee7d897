import { describe, expect, it } from "vitest";

import type { Annotation, CorpusSummary, DocumentPayload } from "../src/api.js";
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
} from "../src/model.js";

function corpus(status: CorpusSummary["status"] = "Done"): CorpusSummary {
  return { corpusId: "c1", status, documentCount: 1, failedCount: 0, progress: null };
}

function payload(): DocumentPayload {
  const anns: Annotation[] = [
    { id: "s0", category: "Spatial", flag: "Pending", start: 5, end: 10, surface: "Paris" },
    { id: "t0", category: "Temporal", flag: "Pending", start: 14, end: 18, surface: "1998" },
  ];
  return {
    corpusId: "c1",
    docId: "d1",
    title: "T",
    abstracts: [{ lang: "en", text: "Near Paris in 1998." }],
    annotations: anns,
  };
}

function readyState() {
  let s = withCorpora(initialState(), [corpus()]);
  s = selectCorpus(s, "c1");
  return withDocument(s, payload());
}

describe("selection and toggles", () => {
  it("selecting an unknown corpus surfaces an error", () => {
    const s = selectCorpus(withCorpora(initialState(), [corpus()]), "ghost");
    expect(s.error).toMatch(/unknown corpus/);
    expect(s.selectedCorpus).toBeNull();
  });

  it("toggling a category never mutates review flags", () => {
    const before = readyState();
    const after = toggleCategory(before, "Spatial");
    expect(after.activeCategories.has("Spatial")).toBe(false);
    expect(after.document).toBe(before.document); // same object: flags untouched
    expect(toggleCategory(after, "Spatial").activeCategories.has("Spatial")).toBe(true);
  });
});

describe("review flow", () => {
  it("optimistic decision shows immediately, confirm folds it in", () => {
    let s = applyDecision(readyState(), "s0", "Rejected");
    expect(effectiveAnnotations(s).find((a) => a.id === "s0")!.flag).toBe("Rejected");
    expect(s.document!.annotations.find((a) => a.id === "s0")!.flag).toBe("Pending");
    s = confirmDecision(s, "s0", "Rejected");
    expect(s.pending.size).toBe(0);
    expect(s.document!.annotations.find((a) => a.id === "s0")!.flag).toBe("Rejected");
  });

  it("rollback restores the server flag and surfaces a notice", () => {
    let s = applyDecision(readyState(), "s0", "Rejected");
    s = rollbackDecision(s, "s0", "network failure");
    expect(effectiveAnnotations(s).find((a) => a.id === "s0")!.flag).toBe("Pending");
    expect(s.error).toBe("network failure");
  });

  it("refuses review while the corpus is not Done", () => {
    let s = withCorpora(initialState(), [corpus("Running")]);
    s = { ...s, selectedCorpus: "c1", document: payload() };
    expect(canReview(s)).toBe(false);
    const after = applyDecision(s, "s0", "Rejected");
    expect(after.pending.size).toBe(0);
    expect(after.error).toMatch(/not ready/);
  });

  it("state is reconstructed identically from the same payloads", () => {
    const a = readyState();
    const b = readyState();
    expect(a).toEqual(b);
    expect(effectiveAnnotations(a)).toEqual(effectiveAnnotations(b));
  });
});

describe("grouping and export gating", () => {
  it("groups annotations by category in document order", () => {
    const groups = groupedAnnotations(readyState());
    expect(groups.get("Spatial")!.map((a) => a.id)).toEqual(["s0"]);
    expect(groups.get("Temporal")!.map((a) => a.id)).toEqual(["t0"]);
    expect(groups.get("Thematic")).toEqual([]);
  });

  it("export requires a Done corpus and a non-empty selection", () => {
    const ready = readyState();
    expect(canExport(ready, ["d1"])).toBe(true);
    expect(canExport(ready, [])).toBe(false);
    let running = withCorpora(initialState(), [corpus("Running")]);
    running = { ...running, selectedCorpus: "c1" };
    expect(canExport(running, ["d1"])).toBe(false);
  });
});
