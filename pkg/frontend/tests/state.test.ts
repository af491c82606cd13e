import { describe, expect, it, vi } from "vitest";

import {
  applyParse,
  beginRequest,
  debounce,
  locateRule,
  measureColumns,
  newDiagnosisView,
  newEditorState,
  outline,
  selectVerdict,
  timelineRows,
  toggleCollapsed,
  toggleMode,
  withVerdicts,
} from "../src/state.js";
import type { DiagnosticJson, VerdictJson } from "../src/types.js";

import checkFixture from "./fixtures/check_situational_r1.json";

const diag = (start: number, msg = "boom"): DiagnosticJson => ({
  severity: "error",
  message: msg,
  code: "SLEEC-E001",
  span: { start, end: start + 3, line: 1, col: 1, end_line: 1, end_col: 4 },
});

describe("parse sequencing", () => {
  it("applies responses in order", () => {
    let s = newEditorState("x");
    const [s1, seqA] = beginRequest(s);
    const [s2, seqB] = beginRequest(s1);
    s = applyParse(s2, seqA, [diag(0)]);
    expect(s.diagnostics).toHaveLength(1);
    s = applyParse(s, seqB, []);
    expect(s.diagnostics).toHaveLength(0);
  });

  it("drops stale responses", () => {
    let s = newEditorState("x");
    const [s1, older] = beginRequest(s);
    const [s2, newer] = beginRequest(s1);
    s = applyParse(s2, newer, []);
    const after = applyParse(s, older, [diag(0, "stale")]);
    expect(after).toBe(s); // unchanged: the stale result is ignored
    expect(after.diagnostics).toHaveLength(0);
  });
});

describe("collapsed blocks", () => {
  it("toggles without mutating the previous state", () => {
    const s = newEditorState("x");
    const t = toggleCollapsed(s, "rule_start");
    expect(t.collapsed.has("rule_start")).toBe(true);
    expect(s.collapsed.has("rule_start")).toBe(false);
    expect(toggleCollapsed(t, "rule_start").collapsed.size).toBe(0);
  });
});

describe("outline", () => {
  const text = [
    "def_start",
    "    event Alpha",
    "    measure ready: boolean",
    "def_end",
    "rule_start",
    "    r1 when Alpha then Alpha",
    "    r2 := when Alpha then Alpha",
    "rule_end",
    "concern_start",
    "    c1 when Alpha then Alpha",
    "concern_end",
  ].join("\n");

  it("finds blocks and their entries", () => {
    const blocks = outline(text);
    expect(blocks.map((b) => b.name)).toEqual(["def_start", "rule_start", "concern_start"]);
    expect(blocks[0].entries.map((e) => e.id)).toEqual(["Alpha", "ready"]);
    expect(blocks[1].entries.map((e) => e.id)).toEqual(["r1", "r2"]);
    expect(blocks[2].entries.map((e) => e.id)).toEqual(["c1"]);
  });

  it("locates rules for editor navigation", () => {
    const at = locateRule(text, "r2");
    expect(text.slice(at, at + 2)).toBe("r2");
    expect(locateRule(text, "zz")).toBe(-1);
  });
});

describe("diagnosis view", () => {
  const verdicts = checkFixture.response.verdicts as unknown as VerdictJson[];

  it("selects the first issue by default", () => {
    const view = withVerdicts(newDiagnosisView(), verdicts);
    expect(view.selected).toBe(0);
    expect(view.verdicts[0].status).toBe("IssueFound");
  });

  it("mode toggling is a pure view change", () => {
    const view = withVerdicts(newDiagnosisView(), verdicts);
    const raw = toggleMode(view);
    expect(raw.mode).toBe("raw");
    expect(raw.verdicts).toBe(view.verdicts); // same server facts
    expect(toggleMode(raw).mode).toBe("filtered");
  });

  it("timeline rows show identical events and timestamps in both modes", () => {
    const view = withVerdicts(newDiagnosisView(), verdicts);
    const v = view.verdicts[0];
    const filtered = timelineRows(v, "filtered");
    const raw = timelineRows(v, "raw");
    expect(filtered.map((r) => r.t)).toEqual(raw.map((r) => r.t));
    expect(filtered.map((r) => r.events)).toEqual(raw.map((r) => r.events));
    expect(measureColumns(filtered)).toEqual(["humanAssents"]);
    expect(measureColumns(raw).length).toBe(8);
  });

  it("ignores out-of-range selections", () => {
    const view = withVerdicts(newDiagnosisView(), verdicts);
    expect(selectVerdict(view, 99)).toBe(view);
  });
});

describe("debounce", () => {
  it("fires once after the delay", () => {
    vi.useFakeTimers();
    const calls: number[] = [];
    const fn = debounce((x: number) => calls.push(x), 300);
    fn(1);
    fn(2);
    vi.advanceTimersByTime(299);
    expect(calls).toEqual([]);
    vi.advanceTimersByTime(1);
    expect(calls).toEqual([2]);
    vi.useRealTimers();
  });
});
