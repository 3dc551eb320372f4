// Papers menu: add a paper by CorpusID. Validates client-side before any
// network call.

export interface PapersMenu {
  element: HTMLElement;
  setBusy(busy: boolean): void;
  showError(message: string): void;
  showNotice(message: string): void;
  clear(): void;
}

export function createPapersMenu(
  doc: Document,
  onSubmit: (corpusId: number) => void,
): PapersMenu {
  const element = doc.createElement('form');
  element.className = 'panel papers-menu';
  element.innerHTML = `
    <h2>Papers</h2>
    <label>CorpusID
      <input name="corpus-id" inputmode="numeric" placeholder="e.g. 9999" autocomplete="off">
    </label>
    <button type="submit" data-action="add-paper">Add paper</button>
    <div class="field-message" role="alert" hidden></div>`;

  const input = element.querySelector('input') as HTMLInputElement;
  const button = element.querySelector('button') as HTMLButtonElement;
  const message = element.querySelector('.field-message') as HTMLElement;

  element.addEventListener('submit', (event) => {
    event.preventDefault();
    const text = input.value.trim();
    if (!/^[0-9]+$/.test(text) || parseInt(text, 10) <= 0) {
      show('Enter a positive integer CorpusID.', 'error');
      return;
    }
    hide();
    onSubmit(parseInt(text, 10));
  });

  function show(text: string, kind: 'error' | 'notice'): void {
    message.textContent = text;
    message.className = `field-message ${kind}`;
    message.hidden = false;
  }

  function hide(): void {
    message.hidden = true;
  }

  return {
    element,
    setBusy(busy) {
      button.disabled = busy;
      input.disabled = busy;
    },
    showError(text) {
      show(text, 'error');
    },
    showNotice(text) {
      show(text, 'notice');
    },
    clear() {
      input.value = '';
      hide();
    },
  };
}
