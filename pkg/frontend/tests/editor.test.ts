import { describe, expect, it } from "vitest";

import {
  diagnosticDecorations,
  Editor,
  overlayHtml,
} from "../src/editor.js";
import type { DiagnosticJson } from "../src/types.js";

const diag = (start: number, end: number, severity: "error" | "warning" = "error"): DiagnosticJson => ({
  severity,
  message: "undeclared identifier 'HumanOnFloor'",
  code: "SLEEC-E001",
  span: { start, end, line: 1, col: 1, end_line: 1, end_col: 1 },
});

describe("overlayHtml", () => {
  it("wraps decorated runs and escapes the rest", () => {
    const html = overlayHtml("a < when x", [
      { startChar: 4, endChar: 8, cls: "squiggle error" },
    ]);
    expect(html).toBe('a &lt; <span class="squiggle error">when</span> x\n');
  });

  it("drops runs swallowed by earlier ones", () => {
    const html = overlayHtml("abcdef", [
      { startChar: 0, endChar: 4, cls: "a" },
      { startChar: 2, endChar: 3, cls: "b" },
    ]);
    expect(html).toBe('<span class="a">abcd</span>ef\n');
  });
});

describe("diagnosticDecorations", () => {
  it("converts byte spans and tags severity", () => {
    const text = "é when x"; // 'w' starts at byte 3, char 2
    const [deco] = diagnosticDecorations(text, [diag(3, 7)]);
    expect(deco.startChar).toBe(2);
    expect(deco.endChar).toBe(6);
    expect(deco.cls).toBe("squiggle error");
  });

  it("widens empty spans so something is visible", () => {
    const [deco] = diagnosticDecorations("abc", [diag(1, 1, "warning")]);
    expect(deco.endChar).toBe(2);
    expect(deco.cls).toBe("squiggle warning");
  });
});

describe("Editor", () => {
  it("renders squiggles into the overlay", () => {
    const host = document.createElement("div");
    document.body.append(host);
    const editor = new Editor(host, "when HumanOnFloor then");
    editor.setDiagnostics([diag(5, 17)]);
    const span = host.querySelector(".squiggle.error");
    expect(span).not.toBeNull();
    expect(span!.textContent).toBe("HumanOnFloor");
  });

  it("inserts completions at the cursor", () => {
    const host = document.createElement("div");
    document.body.append(host);
    const editor = new Editor(host, "when ");
    editor.textarea.setSelectionRange(5, 5);
    editor.insertAtCursor("HumanOnFloor");
    expect(editor.text).toBe("when HumanOnFloor");
    expect(editor.cursor).toBe(17);
  });
});
