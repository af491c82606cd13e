// Textarea-based editor with a mirrored overlay for squiggles and clause
// highlights. The overlay sits behind a transparent-text textarea using the
// same font metrics, so decorated runs line up with the typed text.

import { charIndexOf } from "./offsets.js";
import type { DiagnosticJson, HighlightJson } from "./types.js";

interface Decoration {
  startChar: number;
  endChar: number;
  cls: string;
  title?: string;
}

function escapeHtml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Overlay HTML for the text with the given decorated runs. */
export function overlayHtml(text: string, decorations: Decoration[]): string {
  const sorted = [...decorations]
    .filter((d) => d.endChar > d.startChar)
    .sort((a, b) => a.startChar - b.startChar);
  let html = "";
  let pos = 0;
  for (const d of sorted) {
    const start = Math.max(d.startChar, pos);
    if (start >= d.endChar) continue; // swallowed by an earlier run
    html += escapeHtml(text.slice(pos, start));
    const title = d.title ? ` title="${escapeHtml(d.title)}"` : "";
    html += `<span class="${d.cls}"${title}>${escapeHtml(text.slice(start, d.endChar))}</span>`;
    pos = d.endChar;
  }
  html += escapeHtml(text.slice(pos));
  // A trailing newline keeps the overlay as tall as the textarea.
  return html + "\n";
}

export function diagnosticDecorations(text: string, diagnostics: DiagnosticJson[]): Decoration[] {
  return diagnostics.map((d) => {
    const startChar = charIndexOf(text, d.span.start);
    let endChar = charIndexOf(text, d.span.end);
    if (endChar <= startChar) endChar = Math.min(text.length, startChar + 1);
    return {
      startChar,
      endChar,
      cls: `squiggle ${d.severity}`,
      title: `${d.message} [${d.code}]`,
    };
  });
}

export function highlightDecorations(text: string, highlights: HighlightJson[]): Decoration[] {
  return highlights.map((h) => ({
    startChar: charIndexOf(text, h.start),
    endChar: charIndexOf(text, h.end),
    cls: "clause-highlight",
    title: `clause of ${h.rule}`,
  }));
}

export class Editor {
  readonly textarea: HTMLTextAreaElement;
  private overlay: HTMLElement;
  private diagnostics: DiagnosticJson[] = [];
  private highlights: HighlightJson[] = [];

  constructor(container: HTMLElement, initial: string) {
    container.classList.add("editor");
    this.overlay = document.createElement("pre");
    this.overlay.className = "editor-overlay";
    this.overlay.setAttribute("aria-hidden", "true");
    this.textarea = document.createElement("textarea");
    this.textarea.className = "editor-input";
    this.textarea.spellcheck = false;
    this.textarea.value = initial;
    container.append(this.overlay, this.textarea);
    this.textarea.addEventListener("scroll", () => {
      this.overlay.scrollTop = this.textarea.scrollTop;
      this.overlay.scrollLeft = this.textarea.scrollLeft;
    });
    this.render();
  }

  get text(): string {
    return this.textarea.value;
  }

  set text(value: string) {
    this.textarea.value = value;
    this.render();
  }

  get cursor(): number {
    return this.textarea.selectionStart ?? 0;
  }

  setDiagnostics(diagnostics: DiagnosticJson[]): void {
    this.diagnostics = diagnostics;
    this.render();
  }

  setHighlights(highlights: HighlightJson[]): void {
    this.highlights = highlights;
    this.render();
  }

  insertAtCursor(insert: string): void {
    const pos = this.cursor;
    this.textarea.value = this.text.slice(0, pos) + insert + this.text.slice(pos);
    const after = pos + insert.length;
    this.textarea.setSelectionRange(after, after);
    this.render();
  }

  scrollToChar(index: number): void {
    if (index < 0) return;
    this.textarea.focus();
    this.textarea.setSelectionRange(index, index);
    const line = this.text.slice(0, index).split("\n").length - 1;
    const lineHeightPx = 18;
    this.textarea.scrollTop = Math.max(0, line * lineHeightPx - 60);
    this.overlay.scrollTop = this.textarea.scrollTop;
  }

  render(): void {
    const decorations = [
      ...diagnosticDecorations(this.text, this.diagnostics),
      ...highlightDecorations(this.text, this.highlights),
    ];
    this.overlay.innerHTML = overlayHtml(this.text, decorations);
  }
}

// --- completion popup -----------------------------------------------------------

export class CompletionPopup {
  readonly element: HTMLUListElement;
  private onPick: (insert: string) => void = () => {};

  constructor(parent: HTMLElement) {
    this.element = document.createElement("ul");
    this.element.className = "completions hidden";
    parent.append(this.element);
  }

  show(items: { label: string; kind: string; insert_text: string }[], onPick: (s: string) => void): void {
    this.onPick = onPick;
    this.element.innerHTML = "";
    for (const item of items.slice(0, 12)) {
      const li = document.createElement("li");
      li.innerHTML = `<span class="kind">${escapeHtml(item.kind)}</span> ${escapeHtml(item.label)}`;
      li.addEventListener("mousedown", (e) => {
        e.preventDefault();
        this.pick(item.insert_text);
      });
      this.element.append(li);
    }
    this.element.classList.toggle("hidden", items.length === 0);
  }

  pick(insert: string): void {
    this.onPick(insert);
    this.hide();
  }

  hide(): void {
    this.element.classList.add("hidden");
    this.element.innerHTML = "";
  }

  get visible(): boolean {
    return !this.element.classList.contains("hidden");
  }
}
