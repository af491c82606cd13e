// Workbench wiring: the elicit-check-debug loop against the /api endpoints.
// One parse request may be in flight per keystroke burst (debounced 300 ms,
// stale responses dropped by sequence number); checks run one at a time.

import { Api, ApiError, Client } from "./api.js";
import { byteOffsetOf } from "./offsets.js";
import { CompletionPopup, Editor } from "./editor.js";
import { renderDiagnosisPanel, renderVerdictList } from "./diagnosis.js";
import {
  DiagnosisView,
  EditorState,
  PARSE_DEBOUNCE_MS,
  applyParse,
  beginRequest,
  debounce,
  editText,
  locateRule,
  newDiagnosisView,
  newEditorState,
  outline,
  selectVerdict,
  toggleCollapsed,
  toggleMode,
  withVerdicts,
} from "./state.js";
import type { HighlightJson } from "./types.js";

const STARTER_DOCUMENT = `def_start
    event SmokeDetectorAlarm
    event CallEmergencyServices
    measure userDisablesAlarm: boolean
def_end

rule_start
    r1 when SmokeDetectorAlarm then CallEmergencyServices within 300 seconds
rule_end
`;

const PROPERTIES = ["all", "vacuous", "situational", "redundant", "restrictive", "insufficient"];

export interface App {
  editor: Editor;
  state: () => EditorState;
  view: () => DiagnosisView;
  runCheck: () => Promise<void>;
  parseNow: () => Promise<void>;
}

export function initApp(root: HTMLElement, client: Api, initialText = STARTER_DOCUMENT): App {
  root.innerHTML = `
    <header>
      <h1>sleec workbench</h1>
      <span id="conn-banner" class="banner hidden">service unreachable — editing offline</span>
    </header>
    <main>
      <section id="editor-pane">
        <div class="toolbar">
          <label>property <select id="property-select"></select></label>
          <label>target <select id="target-select"></select></label>
          <button id="run-check">run check</button>
          <span id="target-error" class="inline-error"></span>
        </div>
        <div id="editor-host"></div>
        <div id="outline"></div>
      </section>
      <section id="results-pane">
        <ul id="verdict-list"></ul>
        <div id="diagnosis-panel"></div>
      </section>
    </main>`;

  const editorHost = root.querySelector<HTMLElement>("#editor-host")!;
  const verdictList = root.querySelector<HTMLElement>("#verdict-list")!;
  const diagnosisPanel = root.querySelector<HTMLElement>("#diagnosis-panel")!;
  const outlinePanel = root.querySelector<HTMLElement>("#outline")!;
  const propertySelect = root.querySelector<HTMLSelectElement>("#property-select")!;
  const targetSelect = root.querySelector<HTMLSelectElement>("#target-select")!;
  const runButton = root.querySelector<HTMLButtonElement>("#run-check")!;
  const targetError = root.querySelector<HTMLElement>("#target-error")!;
  const banner = root.querySelector<HTMLElement>("#conn-banner")!;

  for (const p of PROPERTIES) {
    const opt = document.createElement("option");
    opt.value = p;
    opt.textContent = p;
    propertySelect.append(opt);
  }

  const editor = new Editor(editorHost, initialText);
  const popup = new CompletionPopup(editorHost);
  let state = newEditorState(initialText);
  let view = newDiagnosisView();
  let checkInFlight = false;

  function refreshTargets(): void {
    const current = targetSelect.value || "all";
    targetSelect.innerHTML = "";
    const ids = ["all"];
    for (const block of outline(editor.text)) {
      if (block.name === "def_start") continue;
      for (const entry of block.entries) ids.push(entry.id);
    }
    for (const id of ids) {
      const opt = document.createElement("option");
      opt.value = id;
      opt.textContent = id;
      targetSelect.append(opt);
    }
    targetSelect.value = ids.includes(current) ? current : "all";
  }

  function refreshOutline(): void {
    outlinePanel.innerHTML = "";
    for (const block of outline(editor.text)) {
      const div = document.createElement("div");
      div.className = "outline-block";
      const head = document.createElement("button");
      head.className = "outline-head";
      const collapsed = state.collapsed.has(block.name);
      head.textContent = `${collapsed ? "▸" : "▾"} ${block.name.replace("_start", "")}`;
      head.addEventListener("click", () => {
        state = toggleCollapsed(state, block.name);
        refreshOutline();
      });
      div.append(head);
      if (!collapsed) {
        const ul = document.createElement("ul");
        for (const entry of block.entries) {
          const li = document.createElement("li");
          const a = document.createElement("a");
          a.href = "#";
          a.textContent = entry.id;
          a.addEventListener("click", (e) => {
            e.preventDefault();
            editor.scrollToChar(entry.start);
          });
          li.append(a);
          ul.append(li);
        }
        div.append(ul);
      }
      outlinePanel.append(div);
    }
  }

  async function parseNow(): Promise<void> {
    const [next, seq] = beginRequest(state);
    state = next;
    const text = editor.text;
    try {
      const resp = await client.parse(text);
      banner.classList.add("hidden");
      state = applyParse(state, seq, resp.diagnostics);
      if (state.appliedSeq === seq) {
        editor.setDiagnostics(resp.diagnostics);
      }
    } catch {
      banner.classList.remove("hidden");
    }
  }

  const parseDebounced = debounce(() => void parseNow(), PARSE_DEBOUNCE_MS);

  async function maybeComplete(): Promise<void> {
    const text = editor.text;
    const offset = byteOffsetOf(text, editor.cursor);
    try {
      const items = await client.complete(text, offset);
      popup.show(items, (insert) => {
        editor.insertAtCursor(insert);
        state = editText(state, editor.text, editor.cursor);
        parseDebounced();
      });
    } catch {
      popup.hide();
    }
  }

  editor.textarea.addEventListener("input", () => {
    state = editText(state, editor.text, editor.cursor);
    refreshTargets();
    refreshOutline();
    parseDebounced();
    const prev = editor.text[editor.cursor - 1];
    if (prev === " ") {
      void maybeComplete();
    } else {
      popup.hide();
    }
  });
  editor.textarea.addEventListener("keydown", (e) => {
    if (e.key === " " && e.ctrlKey) {
      e.preventDefault();
      void maybeComplete();
    } else if (e.key === "Escape") {
      popup.hide();
    }
  });

  function renderResults(): void {
    renderVerdictList(verdictList, view, (i) => {
      view = selectVerdict(view, i);
      renderResults();
    });
    renderDiagnosisPanel(diagnosisPanel, view, {
      onRelatedClick: (ruleId) => editor.scrollToChar(locateRule(editor.text, ruleId)),
      onToggleMode: () => {
        view = toggleMode(view); // pure view change, no server call
        renderResults();
      },
    });
    const verdict = view.selected === null ? null : view.verdicts[view.selected];
    const highlights: HighlightJson[] =
      verdict?.diagnosis?.[view.mode].highlights ?? [];
    editor.setHighlights(highlights);
  }

  async function runCheck(): Promise<void> {
    if (checkInFlight) return;
    checkInFlight = true;
    runButton.disabled = true;
    targetError.textContent = "";
    try {
      const resp = await client.check({
        text: editor.text,
        property: propertySelect.value,
        target: targetSelect.value || "all",
      });
      banner.classList.add("hidden");
      editor.setDiagnostics(resp.diagnostics);
      view = withVerdicts(view, resp.verdicts);
      renderResults();
    } catch (e) {
      if (e instanceof ApiError && e.status === 422) {
        targetError.textContent = e.detail;
      } else {
        banner.classList.remove("hidden");
      }
    } finally {
      checkInFlight = false;
      runButton.disabled = false;
    }
  }

  runButton.addEventListener("click", () => void runCheck());

  refreshTargets();
  refreshOutline();
  void client.health().then((ok) => banner.classList.toggle("hidden", ok));
  void parseNow();

  return {
    editor,
    state: () => state,
    view: () => view,
    runCheck,
    parseNow,
  };
}

const rootElement = typeof document !== "undefined" ? document.getElementById("app") : null;
if (rootElement) {
  initApp(rootElement, new Client());
}
