// Application controller: bundle picker, rule-only filter toggle,
// modality tabs, hover/keyboard tooltips. At most one fetch is in flight
// per view state; stale responses are discarded by request token.

import { ApiClient, ApiError } from "./api.js";
import type { FilterMode, ViewDoc } from "./api.js";
import { renderError, renderView } from "./panels.js";
import { initialState, RequestToken } from "./state.js";
import type { ClientViewState, ModalityTab } from "./state.js";
import { renderBlocksModality, renderTabBar, renderTextModality } from "./tabs.js";
import { TooltipController } from "./tooltip.js";

export class App {
  readonly state: ClientViewState = initialState();
  private readonly token = new RequestToken();
  private readonly tooltip: TooltipController;
  private currentDoc: ViewDoc | null = null;

  private readonly selector: HTMLSelectElement;
  private readonly filterToggle: HTMLInputElement;
  private readonly tabBar: HTMLElement;
  private readonly content: HTMLElement;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient = new ApiClient(),
  ) {
    this.root.replaceChildren();
    const controls = document.createElement("div");
    controls.className = "controls";

    this.selector = document.createElement("select");
    this.selector.className = "bundle-select";
    this.selector.addEventListener("change", () => {
      void this.showView(this.selector.value, this.state.filter);
    });
    controls.appendChild(this.selector);

    const label = document.createElement("label");
    label.className = "filter-toggle";
    this.filterToggle = document.createElement("input");
    this.filterToggle.type = "checkbox";
    this.filterToggle.addEventListener("change", () => {
      if (this.state.bundleId) {
        void this.showView(this.state.bundleId,
                           this.filterToggle.checked ? "rule" : "all");
      }
    });
    label.appendChild(this.filterToggle);
    label.appendChild(document.createTextNode(" only rule attributes"));
    controls.appendChild(label);

    this.tabBar = document.createElement("div");
    this.tabBar.className = "tab-bar";
    controls.appendChild(this.tabBar);

    this.content = document.createElement("div");
    this.content.className = "content";

    this.root.appendChild(controls);
    this.root.appendChild(this.content);
    this.tooltip = new TooltipController(this.root);
    renderTabBar(this.tabBar, this.state.tab, (tab) => void this.showTab(tab));
  }

  async init(): Promise<void> {
    const listing = await this.api.listExplanations();
    this.selector.replaceChildren();
    for (const info of listing.explanations) {
      const option = document.createElement("option");
      option.value = info.id;
      option.textContent = `${info.id} (${info.prediction})`;
      this.selector.appendChild(option);
    }
    const first = listing.explanations[0];
    if (first) await this.showView(first.id, this.state.filter);
  }

  async showTab(tab: ModalityTab): Promise<void> {
    this.state.tab = tab;
    renderTabBar(this.tabBar, tab, (t) => void this.showTab(t));
    if (!this.state.bundleId) return;
    if (tab === "fiper") {
      await this.showView(this.state.bundleId, this.state.filter);
      return;
    }
    const token = this.token.next();
    try {
      if (tab === "text") {
        const text = await this.api.fetchText(this.state.bundleId);
        if (!this.token.isCurrent(token)) return;
        renderTextModality(this.content, text);
      } else {
        const blocks = await this.api.fetchBlocks(this.state.bundleId);
        if (!this.token.isCurrent(token)) return;
        renderBlocksModality(this.content, blocks);
      }
    } catch (err) {
      if (this.token.isCurrent(token)) this.renderFailure(err);
    }
  }

  async showView(bundleId: string, filter: FilterMode): Promise<void> {
    const token = this.token.next();
    let doc: ViewDoc;
    try {
      doc = await this.api.fetchView(bundleId, filter);
    } catch (err) {
      if (this.token.isCurrent(token)) this.renderFailure(err);
      return;
    }
    if (!this.token.isCurrent(token)) return;  // a newer request won
    this.state.bundleId = bundleId;
    this.state.filter = filter;
    this.state.hovered = null;
    this.currentDoc = doc;
    this.filterToggle.checked = filter === "rule";
    this.tooltip.hide();
    renderView(this.content, doc, {
      onHover: (feature, rowEl) => this.showTooltip(feature, rowEl),
      onLeave: () => this.hideTooltip(),
    });
  }

  showTooltip(feature: string, anchor: HTMLElement): void {
    const row = this.currentDoc?.rows.find((r) => r.feature === feature);
    if (!row) return;  // hovered feature must be a rendered row
    this.state.hovered = feature;
    this.tooltip.show(row, anchor);
  }

  hideTooltip(): void {
    this.state.hovered = null;
    this.tooltip.hide();
  }

  private renderFailure(err: unknown): void {
    const message = err instanceof ApiError
      ? `${err.status}: ${err.message}`
      : String(err);
    renderError(this.content, message);
  }
}

const mount = typeof document !== "undefined"
  ? document.getElementById("app")
  : null;
if (mount) {
  const app = new App(mount);
  void app.init();
}
