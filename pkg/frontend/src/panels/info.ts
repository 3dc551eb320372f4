// Paper information panel: the seven metadata fields for the hovered node,
// falling back to the selected node, then an empty state. Missing optional
// values render as an em dash so the layout never shifts.

import type { NodeModel } from '../types.js';

const EM_DASH = '—';

export interface InfoPanel {
  element: HTMLElement;
  update(hovered: NodeModel | null, selected: NodeModel | null): void;
}

export function createInfoPanel(doc: Document): InfoPanel {
  const element = doc.createElement('aside');
  element.className = 'panel info-panel';
  element.innerHTML = `
    <h2>Paper information</h2>
    <div class="info-empty">Hover or select a paper.</div>
    <dl class="info-fields" hidden>
      <dt>Title</dt><dd data-field="title"></dd>
      <dt>Abstract</dt><dd data-field="abstract"></dd>
      <dt>Authors</dt><dd data-field="authors"></dd>
      <dt>Citation count</dt><dd data-field="citation_count"></dd>
      <dt>Venue</dt><dd data-field="venue"></dd>
      <dt>Year</dt><dd data-field="year"></dd>
      <dt>URL</dt><dd><a data-field="url" target="_blank" rel="noopener"></a></dd>
    </dl>`;

  const empty = element.querySelector('.info-empty') as HTMLElement;
  const fields = element.querySelector('.info-fields') as HTMLElement;

  function set(name: string, value: string): void {
    const cell = element.querySelector(`[data-field="${name}"]`) as HTMLElement;
    cell.textContent = value;
  }

  function update(hovered: NodeModel | null, selected: NodeModel | null): void {
    const node = hovered ?? selected;
    if (!node) {
      empty.hidden = false;
      fields.hidden = true;
      return;
    }
    empty.hidden = true;
    fields.hidden = false;
    set('title', node.title);
    set('abstract', node.abstract ?? EM_DASH);
    set('authors', node.authors.length ? node.authors.join(', ') : EM_DASH);
    set('citation_count', String(node.citation_count));
    set('venue', node.venue ?? EM_DASH);
    set('year', node.year === null ? EM_DASH : String(node.year));
    const link = element.querySelector('[data-field="url"]') as HTMLAnchorElement;
    link.textContent = node.url;
    link.href = node.url;
  }

  return { element, update };
}
