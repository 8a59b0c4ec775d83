// Modality comparison tabs: the interactive two-panel view, the raw rule
// text, and the block rendering, side-by-selectable.

import type { BlocksDoc } from "./api.js";
import type { ModalityTab } from "./state.js";

export const TABS: ModalityTab[] = ["fiper", "text", "blocks"];

export function renderTabBar(
  container: HTMLElement, active: ModalityTab,
  onSelect: (tab: ModalityTab) => void,
): void {
  container.replaceChildren();
  for (const tab of TABS) {
    const button = document.createElement("button");
    button.className = "tab" + (tab === active ? " active" : "");
    button.dataset.tab = tab;
    button.textContent = tab;
    button.addEventListener("click", () => onSelect(tab));
    container.appendChild(button);
  }
}

export function renderTextModality(container: HTMLElement, text: string): void {
  container.replaceChildren();
  const pre = document.createElement("pre");
  pre.className = "modality-text";
  pre.textContent = text;
  container.appendChild(pre);
}

export function renderBlocksModality(container: HTMLElement, doc: BlocksDoc): void {
  container.replaceChildren();
  const wrap = document.createElement("div");
  wrap.className = "modality-blocks";
  for (const group of doc.groups) {
    const groupEl = document.createElement("div");
    groupEl.className = "block-group";
    for (const token of group) {
      const span = document.createElement("span");
      span.className = `block block-${token.role}`;
      span.textContent = token.text;
      groupEl.appendChild(span);
    }
    wrap.appendChild(groupEl);
  }
  const consequence = document.createElement("div");
  consequence.className = "block-group consequence";
  for (const token of doc.consequence) {
    const span = document.createElement("span");
    span.className = `block block-${token.role}`;
    span.textContent = token.text;
    consequence.appendChild(span);
  }
  wrap.appendChild(consequence);
  container.appendChild(wrap);
}
