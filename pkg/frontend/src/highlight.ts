/** Pure span-layout logic: turn annotations over an abstract into flat text
 * segments, each carrying the stack of annotations that cover it.
 *
 * Overlapping and nested spans (a relative spatial entity wraps its anchor)
 * are handled by cutting the text at every span boundary; within a segment
 * the covering annotations are ordered outermost-first, which gives a
 * deterministic nesting for rendering. */

import type { Annotation, Category } from "./api.js";

export const CATEGORY_COLORS: Record<Category, string> = {
  Spatial: "#cde6f7",
  Organization: "#e8d8f0",
  Temporal: "#d9f0d3",
  Thematic: "#fbe8c8",
};

export interface Segment {
  start: number;
  end: number;
  text: string;
  /** Covering annotations, outermost (longest, earliest) first. */
  covering: Annotation[];
}

/** Outermost-first ordering: earlier start wins, then the longer span, then
 * the annotation id as a stable tiebreak. */
export function layerOrder(a: Annotation, b: Annotation): number {
  if (a.start !== b.start) return a.start - b.start;
  if (a.end !== b.end) return b.end - a.end;
  return a.id < b.id ? -1 : a.id > b.id ? 1 : 0;
}

export function segmentText(
  text: string,
  annotations: readonly Annotation[],
  activeCategories: ReadonlySet<Category>,
): Segment[] {
  const visible = annotations
    .filter((a) => activeCategories.has(a.category))
    .filter((a) => a.start >= 0 && a.end <= text.length && a.start < a.end);

  const cuts = new Set<number>([0, text.length]);
  for (const a of visible) {
    cuts.add(a.start);
    cuts.add(a.end);
  }
  const bounds = [...cuts].sort((x, y) => x - y);

  const segments: Segment[] = [];
  for (let i = 0; i + 1 < bounds.length; i++) {
    const start = bounds[i]!;
    const end = bounds[i + 1]!;
    const covering = visible
      .filter((a) => a.start <= start && end <= a.end)
      .sort(layerOrder);
    segments.push({ start, end, text: text.slice(start, end), covering });
  }
  return segments;
}

function escapeHtml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Render segments to HTML. Each covering annotation contributes one nested
 * <mark>; rejected annotations render struck-through. The output is a pure
 * function of the inputs. */
export function renderSegments(segments: readonly Segment[]): string {
  const parts: string[] = [];
  for (const seg of segments) {
    let html = escapeHtml(seg.text);
    for (const ann of [...seg.covering].reverse()) {
      const cls = ann.flag === "Rejected" ? "ann rejected" : "ann";
      html =
        `<mark class="${cls}" data-ann="${escapeHtml(ann.id)}" ` +
        `style="background:${CATEGORY_COLORS[ann.category]}">${html}</mark>`;
    }
    parts.push(html);
  }
  return parts.join("");
}
