// Customization panel: node color/size attribute + domain/range editors,
// label and edge-direction toggles. Edits are sent as PATCH deltas.

import type { StyleAttribute, StyleDoc } from '../types.js';

const ATTRIBUTES: StyleAttribute[] = ['citation_count', 'degree', 'in_degree', 'pagerank', 'year'];

export interface CustomizePanel {
  element: HTMLElement;
  setStyle(style: StyleDoc): void;
  setBusy(busy: boolean): void;
  showError(message: string): void;
}

export function createCustomizePanel(
  doc: Document,
  onEdit: (delta: Partial<StyleDoc>) => void,
): CustomizePanel {
  const element = doc.createElement('section');
  element.className = 'panel customize-panel';
  element.innerHTML = `
    <h2>Customization</h2>
    <fieldset data-group="size">
      <legend>Node size</legend>
      <label>Attribute <select data-role="size-attribute">${options()}</select></label>
      <label>Domain min <input data-role="size-domain-min" type="number" step="any"></label>
      <label>Domain max <input data-role="size-domain-max" type="number" step="any"></label>
      <label>Size min (px) <input data-role="size-range-min" type="number" step="any" min="0.1"></label>
      <label>Size max (px) <input data-role="size-range-max" type="number" step="any" min="0.1"></label>
    </fieldset>
    <fieldset data-group="color">
      <legend>Node color</legend>
      <label>Attribute <select data-role="color-attribute">${options()}</select></label>
      <label>Domain min <input data-role="color-domain-min" type="number" step="any"></label>
      <label>Domain max <input data-role="color-domain-max" type="number" step="any"></label>
      <label>Low color <input data-role="color-lo" type="color"></label>
      <label>High color <input data-role="color-hi" type="color"></label>
    </fieldset>
    <label class="toggle">
      <input type="checkbox" data-role="show-labels"> Show labels
    </label>
    <label class="toggle">
      <input type="checkbox" data-role="show-edge-direction"> Show edge direction
    </label>
    <div class="field-message" role="alert" hidden></div>`;

  const message = element.querySelector('.field-message') as HTMLElement;
  const controls = Array.from(
    element.querySelectorAll<HTMLInputElement | HTMLSelectElement>('select, input'),
  );

  function options(): string {
    return ATTRIBUTES.map((a) => `<option value="${a}">${a.replace(/_/g, ' ')}</option>`).join('');
  }

  function pick<T extends HTMLElement>(role: string): T {
    return element.querySelector(`[data-role="${role}"]`) as T;
  }

  function num(role: string): number {
    return parseFloat(pick<HTMLInputElement>(role).value);
  }

  function currentDelta(): Partial<StyleDoc> {
    return {
      node_size_attribute: pick<HTMLSelectElement>('size-attribute').value as StyleAttribute,
      node_size_domain: [num('size-domain-min'), num('size-domain-max')],
      node_size_range: [num('size-range-min'), num('size-range-max')],
      node_color_attribute: pick<HTMLSelectElement>('color-attribute').value as StyleAttribute,
      node_color_domain: [num('color-domain-min'), num('color-domain-max')],
      node_color_range: [
        pick<HTMLInputElement>('color-lo').value,
        pick<HTMLInputElement>('color-hi').value,
      ],
      show_labels: pick<HTMLInputElement>('show-labels').checked,
      show_edge_direction: pick<HTMLInputElement>('show-edge-direction').checked,
    };
  }

  element.addEventListener('change', () => {
    message.hidden = true;
    onEdit(currentDelta());
  });

  return {
    element,
    setStyle(style) {
      pick<HTMLSelectElement>('size-attribute').value = style.node_size_attribute;
      pick<HTMLInputElement>('size-domain-min').value = String(style.node_size_domain[0]);
      pick<HTMLInputElement>('size-domain-max').value = String(style.node_size_domain[1]);
      pick<HTMLInputElement>('size-range-min').value = String(style.node_size_range[0]);
      pick<HTMLInputElement>('size-range-max').value = String(style.node_size_range[1]);
      pick<HTMLSelectElement>('color-attribute').value = style.node_color_attribute;
      pick<HTMLInputElement>('color-domain-min').value = String(style.node_color_domain[0]);
      pick<HTMLInputElement>('color-domain-max').value = String(style.node_color_domain[1]);
      pick<HTMLInputElement>('color-lo').value = style.node_color_range[0];
      pick<HTMLInputElement>('color-hi').value = style.node_color_range[1];
      pick<HTMLInputElement>('show-labels').checked = style.show_labels;
      pick<HTMLInputElement>('show-edge-direction').checked = style.show_edge_direction;
    },
    setBusy(busy) {
      for (const control of controls) {
        control.disabled = busy;
      }
    },
    showError(text) {
      message.textContent = text;
      message.hidden = false;
    },
  };
}
