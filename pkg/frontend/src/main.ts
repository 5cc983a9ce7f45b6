// Bootstrap: build the page chrome, wire forms to the controller.

import { WorkbenchClient } from "./api.js";
import { WorkbenchApp } from "./app.js";
import { toast } from "./render.js";

function field(labelText: string, input: HTMLElement): HTMLElement {
  const label = document.createElement("label");
  label.className = "field";
  const span = document.createElement("span");
  span.textContent = labelText;
  label.append(span, input);
  return label;
}

function numberInput(value: string, step = "any"): HTMLInputElement {
  const input = document.createElement("input");
  input.type = "number";
  input.step = step;
  input.value = value;
  return input;
}

export function mount(root: HTMLElement, baseUrl: string): WorkbenchApp {
  root.innerHTML = "";

  const header = document.createElement("header");
  header.id = "header";
  const title = document.createElement("h1");
  title.textContent = "GHSOM workbench";
  const statusLine = document.createElement("span");
  statusLine.id = "status";
  statusLine.textContent = "no session";
  header.append(title, statusLine);

  const controls = document.createElement("section");
  controls.id = "controls";
  const dataBox = document.createElement("textarea");
  dataBox.id = "csv-input";
  dataBox.placeholder = "no,lat,lon,alt,name,evaluation,comment\n…";
  const corpusBox = document.createElement("textarea");
  corpusBox.id = "corpus-input";
  corpusBox.placeholder = "one corpus document per line: doc_id<TAB>text";
  const seedInput = numberInput("42", "1");
  const alphaInput = numberInput("0.03");
  const betaInput = numberInput("2");
  const tau1Input = numberInput("0.1");
  const tau2Input = numberInput("0.01");
  const startButton = document.createElement("button");
  startButton.id = "start-button";
  startButton.textContent = "Create session + upload + train";
  const rulesButton = document.createElement("button");
  rulesButton.id = "rules-button";
  rulesButton.textContent = "Show rules";
  const refinePath = document.createElement("input");
  refinePath.id = "refine-path";
  refinePath.placeholder = "[R][01]";
  const refineSeed = numberInput("7", "1");
  const refineAlpha = numberInput("0.03");
  const refineButton = document.createElement("button");
  refineButton.id = "refine-button";
  refineButton.textContent = "Refine";
  controls.append(
    field("records CSV", dataBox),
    field("corpus (id\\ttext per line)", corpusBox),
    field("seed", seedInput),
    field("alpha", alphaInput),
    field("beta", betaInput),
    field("tau1", tau1Input),
    field("tau2", tau2Input),
    startButton,
    rulesButton,
    field("refine path", refinePath),
    field("refine seed", refineSeed),
    field("refine alpha", refineAlpha),
    refineButton,
  );

  const main = document.createElement("main");
  const tree = document.createElement("section");
  tree.id = "tree";
  const sidePanel = document.createElement("aside");
  sidePanel.id = "side-panel";
  main.append(tree, sidePanel);

  const toastHost = document.createElement("div");
  toastHost.id = "toasts";

  root.append(header, controls, main, toastHost);

  const app = new WorkbenchApp(new WorkbenchClient(baseUrl), {
    tree,
    sidePanel,
    statusLine,
    toastHost,
  });
  app.redrawTree();

  startButton.addEventListener("click", () => {
    void (async () => {
      try {
        await app.createSession({
          alpha: Number(alphaInput.value),
          beta: Number(betaInput.value),
          tau1: Number(tau1Input.value),
          tau2: Number(tau2Input.value),
        });
        const docs = corpusBox.value
          .split("\n")
          .map((line) => line.trim())
          .filter(Boolean)
          .map((line, i) => {
            const tab = line.indexOf("\t");
            return tab < 0
              ? { doc_id: `doc${i + 1}`, text: line }
              : { doc_id: line.slice(0, tab), text: line.slice(tab + 1) };
          });
        await app.uploadCorpus(docs);
        await app.uploadData(dataBox.value);
        await app.train(Number(seedInput.value));
      } catch (error) {
        toast(toastHost, String(error));
      }
    })();
  });

  rulesButton.addEventListener("click", () => {
    void app.showRules().catch((error) => toast(toastHost, String(error)));
  });

  refineButton.addEventListener("click", () => {
    void app.refineNode(refinePath.value.trim(), Number(refineSeed.value), {
      alpha: Number(refineAlpha.value),
    });
  });

  return app;
}

declare global {
  interface Window {
    workbenchApp?: WorkbenchApp;
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  const api = new URLSearchParams(window.location.search).get("api") ?? "http://127.0.0.1:8000";
  window.workbenchApp = mount(document.getElementById("app")!, api);
}
