/**
 * The refine / recombine / surprise panel.
 *
 * Submission rules live in a pure model so they are testable: refine needs
 * one target and a prompt, recombination needs at least two selected
 * versions, surprise only needs a stage. Results always come back from the
 * API (pinned server-side); the panel renders the returned change-summary
 * lines verbatim and flags explicit no-ops.
 */

import type { RefineResponseDto, VariationDto } from './types';

export type PromptAction = 'refine' | 'recombine' | 'surprise';

export interface PromptPanelModel {
  action: PromptAction;
  canSubmit: boolean;
  hint: string | null;
}

export function promptPanelModel(
  action: PromptAction,
  selectedIds: string[],
  promptText: string,
): PromptPanelModel {
  if (action === 'refine') {
    if (selectedIds.length !== 1) {
      return { action, canSubmit: false, hint: 'Select exactly one version to refine' };
    }
    if (!promptText.trim()) {
      return { action, canSubmit: false, hint: 'Describe the edit to make' };
    }
    return { action, canSubmit: true, hint: null };
  }
  if (action === 'recombine') {
    if (selectedIds.length < 2) {
      return {
        action,
        canSubmit: false,
        hint: 'Select at least two versions to recombine',
      };
    }
    return { action, canSubmit: true, hint: null };
  }
  return { action: 'surprise', canSubmit: true, hint: null };
}

export interface SummaryNotice {
  lines: string[];
  noop: boolean;
}

/** Render-ready summary of a refine response; no-ops get an explicit notice. */
export function summaryNotice(response: RefineResponseDto): SummaryNotice {
  return {
    lines: [...response.summary.lines],
    noop: response.no_change,
  };
}

/** Badge text for a surprise result ("novelty 0.83"), or null. */
export function noveltyBadge(variation: VariationDto): string | null {
  const novelty = variation.provenance.novelty;
  if (novelty === undefined || novelty === null) return null;
  const badge = `novelty ${novelty.toFixed(2)}`;
  return variation.provenance.low_novelty ? `${badge} (low)` : badge;
}

export interface PromptPanelHandlers {
  onSubmit: (action: PromptAction, prompt: string) => void;
}

export function mountPromptPanel(
  model: PromptPanelModel,
  handlers: PromptPanelHandlers,
): HTMLElement {
  const panel = document.createElement('form');
  panel.className = 'prompt-panel';
  const input = document.createElement('input');
  input.type = 'text';
  input.placeholder = 'Describe an edit, a recombination, or hit surprise';
  const button = document.createElement('button');
  button.type = 'submit';
  button.textContent = model.action;
  button.disabled = !model.canSubmit;
  if (model.hint) {
    const hint = document.createElement('span');
    hint.className = 'hint';
    hint.textContent = model.hint;
    panel.appendChild(hint);
  }
  panel.appendChild(input);
  panel.appendChild(button);
  panel.onsubmit = (event) => {
    event.preventDefault();
    if (model.canSubmit) handlers.onSubmit(model.action, input.value);
  };
  return panel;
}
