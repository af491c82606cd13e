// Rendering of verdict summaries and the selected diagnosis: timeline table,
// counts, related-rule links. Inputs are exactly the server JSON facts.

import {
  DiagnosisView,
  TimelineRow,
  measureColumns,
  selectedVerdict,
  timelineRows,
} from "./state.js";
import type { VerdictJson } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  cls?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (cls) node.className = cls;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function verdictLabel(v: VerdictJson): string {
  let label = `${v.property}(${v.target}): ${v.status}`;
  if (v.budget_exhausted) label += " (budget exhausted)";
  return label;
}

export function renderVerdictList(
  list: HTMLElement,
  view: DiagnosisView,
  onSelect: (index: number) => void,
): void {
  list.innerHTML = "";
  if (!view.verdicts.length) {
    list.append(el("li", "empty", "no issues — run a check to see verdicts"));
    return;
  }
  view.verdicts.forEach((v, i) => {
    const li = el("li", v.status === "IssueFound" ? "verdict issue" : "verdict ok");
    li.textContent = verdictLabel(v);
    if (v.conflict_set) li.textContent += `  {${v.conflict_set.join(", ")}}`;
    if (i === view.selected) li.classList.add("selected");
    li.addEventListener("click", () => onSelect(i));
    list.append(li);
  });
}

/** Timeline table: one row per trace point; measure columns after events. */
export function renderTimeline(container: HTMLElement, rows: TimelineRow[]): void {
  container.innerHTML = "";
  if (!rows.length) {
    container.append(el("p", "empty", "no trace points"));
    return;
  }
  const columns = measureColumns(rows);
  const table = el("table", "timeline");
  const head = el("tr");
  head.append(el("th", undefined, "t"), el("th", undefined, "events"));
  for (const name of columns) {
    const th = el("th", "measure-col", name);
    head.append(th);
  }
  table.append(head);
  for (const row of rows) {
    const tr = el("tr");
    tr.append(el("td", "t-cell", String(row.t)));
    tr.append(el("td", "events-cell", row.events.join(", ")));
    for (const name of columns) {
      const cell = row.measures.find((m) => m.name === name);
      tr.append(el("td", "measure-cell", cell ? cell.value : ""));
    }
    table.append(tr);
  }
  container.append(table);
}

export interface DiagnosisPanelHooks {
  onRelatedClick: (ruleId: string) => void;
  onToggleMode: () => void;
}

export function renderDiagnosisPanel(
  panel: HTMLElement,
  view: DiagnosisView,
  hooks: DiagnosisPanelHooks,
): void {
  panel.innerHTML = "";
  const verdict = selectedVerdict(view);
  if (!verdict) {
    panel.append(el("p", "empty", "select a verdict"));
    return;
  }

  const header = el("div", "diag-header");
  header.append(el("strong", undefined, verdictLabel(verdict)));
  const diagnosis = verdict.diagnosis;
  if (diagnosis) {
    const counts = diagnosis[view.mode].counts;
    header.append(
      el(
        "span",
        "counts",
        ` showing ${view.mode === "filtered" ? counts.shown : counts.total} of ${counts.total} measures`,
      ),
    );
    const toggle = el("button", "mode-toggle");
    toggle.id = "mode-toggle";
    toggle.textContent = view.mode === "filtered" ? "show raw" : "show filtered";
    toggle.addEventListener("click", hooks.onToggleMode);
    header.append(toggle);
  }
  panel.append(header);

  const rows = timelineRows(verdict, view.mode);
  const timeline = el("div", "timeline-box");
  renderTimeline(timeline, rows);
  panel.append(timeline);

  const related = diagnosis?.[view.mode].related_rules;
  if (related && related.length) {
    const box = el("div", "related-rules");
    box.append(el("h3", undefined, "rules sharing events with the concern"));
    const ul = el("ul");
    for (const r of related) {
      const li = el("li");
      const link = el("a", "related-link", r.rule);
      link.href = "#";
      link.addEventListener("click", (e) => {
        e.preventDefault();
        hooks.onRelatedClick(r.rule);
      });
      li.append(link, el("span", "shared-events", ` (${r.events.join(", ")})`));
      ul.append(li);
    }
    box.append(ul);
    panel.append(box);
  }
}
