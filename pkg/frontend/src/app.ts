// Controller: wires the API client to the view model and the DOM. One
// mutating request in flight at a time, mirroring the server's
// single-writer sessions.

import { ApiError, WorkbenchClient } from "./api.js";
import type { FilterRule, ParamOverrides } from "./api.js";
import {
  ViewModel,
  beginRefine,
  failRefine,
  finishRefine,
  initialModel,
  refineAllowed,
  withHierarchy,
  withSelection,
  withSession,
} from "./model.js";
import { renderMap, renderReport, renderSampleTable, replaceSubtree, toast } from "./render.js";

export interface AppElements {
  tree: HTMLElement;
  sidePanel: HTMLElement;
  statusLine: HTMLElement;
  toastHost: HTMLElement;
}

export class WorkbenchApp {
  vm: ViewModel = initialModel();

  constructor(
    readonly client: WorkbenchClient,
    readonly el: AppElements,
  ) {}

  private setStatus(text: string): void {
    this.vm = { ...this.vm, status: text };
    this.el.statusLine.textContent = text;
  }

  async createSession(params?: ParamOverrides): Promise<string> {
    const created = await this.client.createSession(params);
    this.vm = withSession(this.vm, created.id);
    this.el.statusLine.textContent = this.vm.status;
    return created.id;
  }

  async uploadData(csv: string): Promise<void> {
    const result = await this.client.uploadData(this.requireSession(), csv);
    this.setStatus(`${result.records} records uploaded`);
  }

  async uploadCorpus(documents: { doc_id: string; text: string }[]): Promise<void> {
    const result = await this.client.uploadCorpus(this.requireSession(), documents);
    this.setStatus(`${result.documents} corpus documents`);
  }

  async train(seed: number, params?: ParamOverrides): Promise<void> {
    const summary = await this.client.train(this.requireSession(), seed, params);
    this.vm = withHierarchy(this.vm, summary);
    this.redrawTree();
    this.setStatus(`trained: depth ${summary.depth}`);
  }

  async refreshHierarchy(): Promise<void> {
    const summary = await this.client.hierarchy(this.requireSession());
    this.vm = withHierarchy(this.vm, summary);
    this.redrawTree();
  }

  /** Tap a unit: fetch and show its sample table. */
  async tapUnit(path: string): Promise<void> {
    if (this.vm.busy) {
      toast(this.el.toastHost, "busy: refine in progress");
      return;
    }
    this.vm = withSelection(this.vm, path);
    try {
      const response = await this.client.samples(this.requireSession(), path);
      this.el.sidePanel.replaceChildren(renderSampleTable(response.path, response.samples));
    } catch (error) {
      if (error instanceof ApiError && error.status === 404) {
        // stale path after a refine elsewhere: refetch and tell the analyst
        await this.refreshHierarchy();
        toast(this.el.toastHost, `${path} no longer exists; hierarchy refreshed`);
        return;
      }
      throw error;
    }
  }

  /** Refine the tapped node's parent map; redraw only the affected subtree. */
  async refineNode(path: string, seed: number, overrides?: ParamOverrides): Promise<void> {
    if (!refineAllowed(this.vm)) {
      toast(this.el.toastHost, "refine not available (busy or no hierarchy)");
      return;
    }
    this.vm = beginRefine(this.vm);
    this.el.statusLine.textContent = this.vm.status;
    try {
      const result = await this.client.refine(this.requireSession(), path, seed, overrides);
      this.vm = finishRefine(this.vm, result.hierarchy, result.report);
      const scopeMap =
        result.scope === result.hierarchy.map.path
          ? result.hierarchy.map
          : this.findScope(result.scope, result.hierarchy.map);
      const replaced = replaceSubtree(
        this.treeRootElement(),
        result.scope,
        scopeMap,
        (p) => void this.tapUnit(p),
      );
      if (!replaced) {
        this.redrawTree(); // scope container not on screen: fall back to full draw
      }
      this.el.sidePanel.replaceChildren(renderReport(result.report));
      this.el.statusLine.textContent = this.vm.status;
    } catch (error) {
      const message =
        error instanceof ApiError && error.isConflict
          ? "refine rejected: another operation is running"
          : `refine failed: ${String(error)}`;
      this.vm = failRefine(this.vm, message);
      this.el.statusLine.textContent = this.vm.status;
      toast(this.el.toastHost, message);
      if (!(error instanceof ApiError)) {
        throw error;
      }
    }
  }

  async showRules(): Promise<{ rules: FilterRule[]; treeText: string }> {
    const response = await this.client.rules(this.requireSession());
    const panel = document.createElement("div");
    panel.className = "rules-panel";
    const heading = document.createElement("h3");
    heading.textContent = `${response.rules.length} rule(s)`;
    panel.appendChild(heading);
    const list = document.createElement("ol");
    for (const rule of response.rules) {
      const item = document.createElement("li");
      const tests = rule.if.map((c) => `${c.attr} ${c.op} ${c.value}`).join(" & ");
      item.textContent = tests ? `IF ${tests} THEN ${rule.then}` : `always → ${rule.then}`;
      list.appendChild(item);
    }
    panel.appendChild(list);
    const pre = document.createElement("pre");
    pre.textContent = response.tree_text;
    panel.appendChild(pre);
    this.el.sidePanel.replaceChildren(panel);
    return { rules: response.rules, treeText: response.tree_text };
  }

  async runFilter(csv: string, rules?: FilterRule[]): Promise<number> {
    const response = await this.client.filter(this.requireSession(), csv, rules);
    const panel = document.createElement("div");
    panel.className = "filter-panel";
    const heading = document.createElement("h3");
    heading.textContent = `${response.messages.length} outgoing message(s)`;
    panel.appendChild(heading);
    const list = document.createElement("ul");
    for (const message of response.messages) {
      const item = document.createElement("li");
      item.textContent = `[${message.area}] ${message.text}`;
      list.appendChild(item);
    }
    panel.appendChild(list);
    this.el.sidePanel.replaceChildren(panel);
    return response.messages.length;
  }

  redrawTree(): void {
    if (!this.vm.hierarchy) {
      this.el.tree.replaceChildren(trainPrompt());
      return;
    }
    this.el.tree.replaceChildren(
      renderMap(this.vm.hierarchy.map, (p) => void this.tapUnit(p)),
    );
  }

  private treeRootElement(): HTMLElement {
    const root = this.el.tree.firstElementChild;
    if (!(root instanceof HTMLElement)) {
      throw new Error("tree not rendered yet");
    }
    return root;
  }

  private findScope(scope: string, map: import("./api.js").MapNode) {
    const walk = (m: import("./api.js").MapNode): import("./api.js").MapNode | null => {
      if (m.path === scope) {
        return m;
      }
      for (const unit of m.units) {
        if (unit.child) {
          const hit = walk(unit.child);
          if (hit) {
            return hit;
          }
        }
      }
      return null;
    };
    const found = walk(map);
    if (!found) {
      throw new Error(`scope ${scope} missing from refreshed hierarchy`);
    }
    return found;
  }

  private requireSession(): string {
    if (!this.vm.sessionId) {
      throw new Error("no session created yet");
    }
    return this.vm.sessionId;
  }
}

function trainPrompt(): HTMLElement {
  const p = document.createElement("p");
  p.className = "train-prompt";
  p.textContent = "No hierarchy yet — upload data and a corpus, then train.";
  return p;
}
