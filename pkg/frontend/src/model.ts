// View-model state and its pure transitions. UI state is a function of the
// last server hierarchy payload plus (selection, busy); cluster data is
// never mutated client-side.

import type { HierarchySummary, MapNode, RefineReport, UnitNode } from "./api.js";

export const PATH_GRAMMAR = /^\[R\](\[[0-9][0-9]\])*(:[0-9]+)?$/;

export interface ViewModel {
  sessionId: string | null;
  hierarchy: HierarchySummary | null;
  selection: string | null;
  busy: boolean;
  lastReport: RefineReport | null;
  status: string;
}

export function initialModel(): ViewModel {
  return {
    sessionId: null,
    hierarchy: null,
    selection: null,
    busy: false,
    lastReport: null,
    status: "no session",
  };
}

export function withSession(vm: ViewModel, sessionId: string): ViewModel {
  return { ...vm, sessionId, status: `session ${sessionId.slice(0, 8)}` };
}

export function withHierarchy(vm: ViewModel, hierarchy: HierarchySummary): ViewModel {
  // selection survives a redraw only if the path still exists
  const selection =
    vm.selection && findMap(hierarchy.map, vm.selection) === null && !unitExists(hierarchy.map, vm.selection)
      ? null
      : vm.selection;
  return { ...vm, hierarchy, selection };
}

export function withSelection(vm: ViewModel, path: string | null): ViewModel {
  return { ...vm, selection: path };
}

export function beginRefine(vm: ViewModel): ViewModel {
  return { ...vm, busy: true, status: "refining…" };
}

export function finishRefine(
  vm: ViewModel,
  hierarchy: HierarchySummary,
  report: RefineReport,
): ViewModel {
  return {
    ...withHierarchy(vm, hierarchy),
    busy: false,
    lastReport: report,
    status:
      `refined: depth ${report.depth_before} → ${report.depth_after}, ` +
      `${report.case1_stops} stop(s), ${report.case2_insertions} insertion(s)`,
  };
}

export function failRefine(vm: ViewModel, message: string): ViewModel {
  return { ...vm, busy: false, status: message };
}

/** Refine/tap actions are blocked while a mutation is in flight. */
export function refineAllowed(vm: ViewModel): boolean {
  return !vm.busy && vm.hierarchy !== null && vm.sessionId !== null;
}

export function validLabel(label: string): boolean {
  return PATH_GRAMMAR.test(label);
}

/** The map node whose container owns a given path ("[R]" is the root map). */
export function findMap(root: MapNode, path: string): MapNode | null {
  if (root.path === path) {
    return root;
  }
  for (const unit of root.units) {
    if (unit.child) {
      const hit = findMap(unit.child, path);
      if (hit) {
        return hit;
      }
    }
  }
  return null;
}

export function unitExists(root: MapNode, path: string): boolean {
  for (const unit of root.units) {
    if (unit.path === path) {
      return true;
    }
    if (unit.child && unitExists(unit.child, path)) {
      return true;
    }
  }
  return false;
}

export function collectUnits(root: MapNode): UnitNode[] {
  const out: UnitNode[] = [];
  const walk = (map: MapNode) => {
    for (const unit of map.units) {
      out.push(unit);
      if (unit.child) {
        walk(unit.child);
      }
    }
  };
  walk(root);
  return out;
}
