// DOM construction for the hierarchy tree, sample table, and report line.
// Every map subtree lives in a container carrying data-path, so a refine
// can swap exactly the affected region and leave sibling DOM nodes alone.

import type { MapNode, SampleRow, UnitNode } from "./api.js";

export type TapHandler = (path: string) => void;

export function renderMap(map: MapNode, onTap: TapHandler): HTMLElement {
  const container = document.createElement("div");
  container.className = "map-subtree";
  container.dataset.path = map.path;

  const grid = document.createElement("div");
  grid.className = "map-grid";
  grid.style.gridTemplateColumns = `repeat(${map.cols}, auto)`;
  const byPosition = new Map<string, UnitNode>();
  for (const unit of map.units) {
    byPosition.set(`${unit.row},${unit.col}`, unit);
  }
  for (let r = 0; r < map.rows; r++) {
    for (let c = 0; c < map.cols; c++) {
      const unit = byPosition.get(`${r},${c}`);
      if (unit) {
        grid.appendChild(renderCell(unit, onTap));
      }
    }
  }
  container.appendChild(grid);

  for (const unit of map.units) {
    if (unit.child) {
      const branch = document.createElement("div");
      branch.className = "map-branch";
      const caption = document.createElement("div");
      caption.className = "branch-caption";
      caption.textContent = `↳ ${unit.path}`;
      branch.appendChild(caption);
      branch.appendChild(renderMap(unit.child, onTap));
      container.appendChild(branch);
    }
  }
  return container;
}

function renderCell(unit: UnitNode, onTap: TapHandler): HTMLElement {
  const cell = document.createElement("button");
  cell.type = "button";
  cell.className = "unit-cell";
  cell.dataset.path = unit.path;
  cell.style.backgroundColor = unit.color;
  cell.style.color = contrastColor(unit.color);
  cell.textContent = unit.label;
  cell.title = `qe ${unit.qe.toFixed(4)}`;
  cell.addEventListener("click", () => onTap(unit.path));
  return cell;
}

function contrastColor(hex: string): string {
  const r = parseInt(hex.slice(1, 3), 16);
  const g = parseInt(hex.slice(3, 5), 16);
  const b = parseInt(hex.slice(5, 7), 16);
  return 0.299 * r + 0.587 * g + 0.114 * b > 140 ? "#111" : "#fff";
}

/** Replace only the subtree owned by scopePath, leaving the rest intact. */
export function replaceSubtree(
  treeRoot: HTMLElement,
  scopePath: string,
  freshMap: MapNode,
  onTap: TapHandler,
): boolean {
  const selector = `.map-subtree[data-path="${cssEscape(scopePath)}"]`;
  const current = treeRoot.matches?.(selector)
    ? treeRoot
    : treeRoot.querySelector<HTMLElement>(selector);
  if (!current) {
    return false;
  }
  current.replaceWith(renderMap(freshMap, onTap));
  return true;
}

function cssEscape(value: string): string {
  // CSS.escape is missing from some DOM environments
  return value.replace(/[\[\]:]/g, (ch) => `\\${ch}`);
}

const SAMPLE_COLUMNS: [keyof SampleRow, string][] = [
  ["id", "id"],
  ["name", "name"],
  ["evaluation", "eva"],
  ["comment", "comment"],
  ["tfidf_max", "tfidf max"],
  ["tfidf_sum", "tfidf sum"],
];

export function renderSampleTable(path: string, rows: SampleRow[]): HTMLElement {
  const wrapper = document.createElement("div");
  wrapper.className = "sample-panel";
  const heading = document.createElement("h3");
  heading.textContent = `${path} — ${rows.length} sample(s)`;
  wrapper.appendChild(heading);

  const table = document.createElement("table");
  table.className = "sample-table";
  const head = table.createTHead().insertRow();
  for (const [, title] of SAMPLE_COLUMNS) {
    const th = document.createElement("th");
    th.textContent = title;
    head.appendChild(th);
  }
  const body = table.createTBody();
  for (const row of rows) {
    const tr = body.insertRow();
    tr.dataset.sampleIndex = String(row.index);
    for (const [key] of SAMPLE_COLUMNS) {
      const value = row[key];
      const cell = tr.insertCell();
      cell.textContent =
        value === undefined || value === null
          ? ""
          : typeof value === "number" && !Number.isInteger(value)
            ? value.toFixed(6)
            : String(value);
    }
  }
  wrapper.appendChild(table);
  return wrapper;
}

export function renderReport(report: {
  depth_before: number;
  depth_after: number;
  case1_stops: number;
  case2_insertions: number;
  duration_ms: number;
}): HTMLElement {
  const line = document.createElement("p");
  line.className = "refine-report";
  line.textContent =
    `depth ${report.depth_before} → ${report.depth_after} · ` +
    `${report.case1_stops} stratification stop(s) · ` +
    `${report.case2_insertions} unit insertion(s) · ` +
    `${report.duration_ms.toFixed(0)} ms`;
  return line;
}

export function toast(host: HTMLElement, message: string): void {
  const note = document.createElement("div");
  note.className = "toast";
  note.textContent = message;
  host.appendChild(note);
  setTimeout(() => note.remove(), 4000);
}
