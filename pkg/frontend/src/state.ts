// Pure state logic for the workbench: editor state with stale-response
// dropping, block outline, and the diagnosis view model. Everything here is
// a plain function so it can be tested without a DOM.

import type { DiagnosticJson, TraceRowJson, VerdictJson } from "./types.js";

export interface EditorState {
  text: string;
  cursor: number; // JS string index
  diagnostics: DiagnosticJson[];
  collapsed: Set<string>;
  nextSeq: number; // next parse request sequence number
  appliedSeq: number; // newest parse response applied
}

export function newEditorState(text: string): EditorState {
  return {
    text,
    cursor: 0,
    diagnostics: [],
    collapsed: new Set(),
    nextSeq: 1,
    appliedSeq: 0,
  };
}

export function editText(state: EditorState, text: string, cursor: number): EditorState {
  return { ...state, text, cursor };
}

/** Allocate a sequence number for an outgoing parse/complete request. */
export function beginRequest(state: EditorState): [EditorState, number] {
  return [{ ...state, nextSeq: state.nextSeq + 1 }, state.nextSeq];
}

/** Apply a parse response unless a newer one landed (stale ones are dropped). */
export function applyParse(
  state: EditorState,
  seq: number,
  diagnostics: DiagnosticJson[],
): EditorState {
  if (seq <= state.appliedSeq) return state;
  return { ...state, appliedSeq: seq, diagnostics };
}

export function toggleCollapsed(state: EditorState, block: string): EditorState {
  const collapsed = new Set(state.collapsed);
  if (collapsed.has(block)) collapsed.delete(block);
  else collapsed.add(block);
  return { ...state, collapsed };
}

// --- outline ----------------------------------------------------------------

export interface OutlineBlock {
  name: string; // e.g. "rule_start"
  start: number; // char index of the marker
  entries: { id: string; start: number }[];
}

const BLOCK_RE = /\b(def_start|rule_start|concern_start|purpose_start)\b/g;
const END_RE = /\b(def_end|rule_end|concern_end|purpose_end)\b/g;
const ENTRY_RE = /(^|\n)\s*([A-Za-z_][A-Za-z0-9_]*)\s*(:=\s*)?(?=when\b)/g;
const DEF_RE = /(^|\n)\s*(?:event|measure|constant)\s+([A-Za-z_][A-Za-z0-9_]*)/g;

/** Block structure for the outline panel (editor furniture, not verdicts). */
export function outline(text: string): OutlineBlock[] {
  const blocks: OutlineBlock[] = [];
  const starts = [...text.matchAll(BLOCK_RE)];
  const ends = [...text.matchAll(END_RE)];
  for (const m of starts) {
    const name = m[1];
    const start = m.index ?? 0;
    const end = ends.find((e) => (e.index ?? 0) > start && e[1] === name.replace("_start", "_end"));
    const upper = end ? (end.index ?? text.length) : text.length;
    const body = text.slice(start, upper);
    const entryRe = name === "def_start" ? DEF_RE : ENTRY_RE;
    entryRe.lastIndex = 0;
    const entries = [...body.matchAll(entryRe)].map((e) => {
      const inner = (e.index ?? 0) + e[0].indexOf(e[2]);
      return { id: e[2], start: start + inner };
    });
    blocks.push({ name, start, entries });
  }
  return blocks;
}

/** Char index where a rule/concern/purpose with this id is declared. */
export function locateRule(text: string, id: string): number {
  const re = new RegExp(`(^|\\n)\\s*(${escapeRe(id)})\\s*(:=)?\\s*when\\b`);
  const m = re.exec(text);
  if (!m) return -1;
  return m.index + m[0].indexOf(id);
}

function escapeRe(s: string): string {
  return s.replace(/[.*+?^${}()|[\]\\]/g, "\\$&");
}

// --- diagnosis view -----------------------------------------------------------

export type Mode = "raw" | "filtered";

export interface DiagnosisView {
  verdicts: VerdictJson[];
  selected: number | null;
  mode: Mode;
}

export function newDiagnosisView(): DiagnosisView {
  return { verdicts: [], selected: null, mode: "filtered" };
}

export function withVerdicts(view: DiagnosisView, verdicts: VerdictJson[]): DiagnosisView {
  const firstIssue = verdicts.findIndex((v) => v.status === "IssueFound");
  return { ...view, verdicts, selected: firstIssue >= 0 ? firstIssue : verdicts.length ? 0 : null };
}

export function selectVerdict(view: DiagnosisView, index: number): DiagnosisView {
  if (index < 0 || index >= view.verdicts.length) return view;
  return { ...view, selected: index };
}

/** Pure view change: no server call, both renderings were already delivered. */
export function toggleMode(view: DiagnosisView): DiagnosisView {
  return { ...view, mode: view.mode === "filtered" ? "raw" : "filtered" };
}

export function selectedVerdict(view: DiagnosisView): VerdictJson | null {
  return view.selected === null ? null : view.verdicts[view.selected];
}

export interface TimelineRow {
  t: number;
  events: string[];
  measures: { name: string; value: string }[];
}

/** Timeline rows for a verdict in the given mode, straight from server facts. */
export function timelineRows(verdict: VerdictJson, mode: Mode): TimelineRow[] {
  const diagnosis = verdict.diagnosis;
  let rows: TraceRowJson[];
  if (diagnosis) {
    rows = diagnosis[mode].trace;
  } else {
    rows = (verdict.witness ?? verdict.situation)?.points ?? [];
  }
  return rows.map((r) => ({
    t: r.t,
    events: [...r.events],
    measures: Object.entries(r.measures).map(([name, value]) => ({
      name,
      value: formatValue(value),
    })),
  }));
}

export function formatValue(v: boolean | number | string): string {
  if (typeof v === "boolean") return v ? "true" : "false";
  return String(v);
}

/** Names of all measure columns appearing in a set of timeline rows. */
export function measureColumns(rows: TimelineRow[]): string[] {
  const seen: string[] = [];
  for (const row of rows) {
    for (const m of row.measures) {
      if (!seen.includes(m.name)) seen.push(m.name);
    }
  }
  return seen;
}

// --- debounce -------------------------------------------------------------------

export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  delayMs: number,
): (...args: A) => void {
  let handle: ReturnType<typeof setTimeout> | undefined;
  return (...args: A) => {
    if (handle !== undefined) clearTimeout(handle);
    handle = setTimeout(() => fn(...args), delayMs);
  };
}

export const PARSE_DEBOUNCE_MS = 300;
