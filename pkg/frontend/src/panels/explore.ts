// Exploration dropdown: expand the selected node's references or citations
// with a chosen ordering. Reflects Busy/RateLimited/exhausted states.

export interface ExplorePanel {
  element: HTMLElement;
  setSelection(corpusId: number | null): void;
  setBusy(busy: boolean): void;
  setExhausted(direction: string, exhausted: boolean): void;
  showCountdown(seconds: number): void;
  showError(message: string, retryable: boolean): void;
  clearStatus(): void;
}

export function createExplorePanel(
  doc: Document,
  onExpand: (direction: 'references' | 'citations', strategy: string) => void,
): ExplorePanel {
  const element = doc.createElement('section');
  element.className = 'panel explore-panel';
  element.innerHTML = `
    <h2>Exploration</h2>
    <div class="explore-selection">No paper selected.</div>
    <label>Order by
      <select data-role="strategy">
        <option value="upstream_order" selected>Upstream order</option>
        <option value="citation_count_desc">Citation count</option>
        <option value="recency_desc">Recency</option>
      </select>
    </label>
    <div class="explore-actions">
      <button data-action="expand-references" disabled>Add 5 references</button>
      <button data-action="expand-citations" disabled>Add 5 citations</button>
    </div>
    <div class="explore-status" hidden></div>`;

  const selectionLine = element.querySelector('.explore-selection') as HTMLElement;
  const strategySelect = element.querySelector('[data-role="strategy"]') as HTMLSelectElement;
  const refsButton = element.querySelector('[data-action="expand-references"]') as HTMLButtonElement;
  const citesButton = element.querySelector('[data-action="expand-citations"]') as HTMLButtonElement;
  const status = element.querySelector('.explore-status') as HTMLElement;

  let selection: number | null = null;
  let busy = false;
  const exhausted = new Set<string>();
  let countdownTimer: ReturnType<typeof setInterval> | null = null;

  refsButton.addEventListener('click', () => fire('references'));
  citesButton.addEventListener('click', () => fire('citations'));

  function fire(direction: 'references' | 'citations'): void {
    if (busy || selection === null) return; // in-flight clicks are inert
    onExpand(direction, strategySelect.value);
  }

  function refreshButtons(): void {
    const inert = busy || selection === null;
    refsButton.disabled = inert || exhausted.has('references');
    citesButton.disabled = inert || exhausted.has('citations');
    refsButton.textContent = exhausted.has('references') ? 'No more references' : 'Add 5 references';
    citesButton.textContent = exhausted.has('citations') ? 'No more citations' : 'Add 5 citations';
  }

  function stopCountdown(): void {
    if (countdownTimer !== null) {
      clearInterval(countdownTimer);
      countdownTimer = null;
    }
  }

  return {
    element,
    setSelection(corpusId) {
      if (corpusId !== selection) {
        exhausted.clear();
      }
      selection = corpusId;
      selectionLine.textContent =
        corpusId === null ? 'No paper selected.' : `Selected paper ${corpusId}.`;
      refreshButtons();
    },
    setBusy(value) {
      busy = value;
      element.classList.toggle('is-busy', value);
      refreshButtons();
    },
    setExhausted(direction, value) {
      if (value) {
        exhausted.add(direction);
      } else {
        exhausted.delete(direction);
      }
      refreshButtons();
    },
    showCountdown(seconds) {
      stopCountdown();
      let remaining = Math.ceil(seconds);
      status.hidden = false;
      status.className = 'explore-status countdown';
      status.textContent = `Rate limited; retry in ${remaining}s`;
      countdownTimer = setInterval(() => {
        remaining -= 1;
        if (remaining <= 0) {
          stopCountdown();
          status.hidden = true;
        } else {
          status.textContent = `Rate limited; retry in ${remaining}s`;
        }
      }, 1000);
    },
    showError(message, retryable) {
      stopCountdown();
      status.hidden = false;
      status.className = 'explore-status error';
      status.textContent = retryable ? `${message} - try again` : message;
    },
    clearStatus() {
      stopCountdown();
      status.hidden = true;
    },
  };
}
