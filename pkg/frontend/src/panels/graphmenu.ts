// Graph menu: download the snapshot, upload one to resume, publish to the
// server for a share URL plus HTML/Jupyter embed snippets.

export interface PublishInfo {
  url: string;
  shareId: string;
  htmlSnippet: string;
  jupyterSnippet: string;
}

export interface GraphMenu {
  element: HTMLElement;
  setBusy(busy: boolean): void;
  showPublished(info: PublishInfo): void;
  showError(message: string): void;
}

export function createGraphMenu(
  doc: Document,
  handlers: {
    onSave: () => void;
    onUpload: (file: File) => void;
    onPublish: () => void;
  },
): GraphMenu {
  const element = doc.createElement('section');
  element.className = 'panel graph-menu';
  element.innerHTML = `
    <h2>Graph</h2>
    <div class="graph-actions">
      <button data-action="save-snapshot">Download snapshot</button>
      <label class="upload-label">
        Upload snapshot
        <input data-action="upload-snapshot" type="file" accept=".json,application/json" hidden>
      </label>
      <button data-action="publish-snapshot">Publish &amp; share</button>
    </div>
    <div class="field-message" role="alert" hidden></div>
    <div class="share-result" hidden>
      <p>Share URL: <a data-role="share-url" target="_blank" rel="noopener"></a>
        <button data-action="copy-url">Copy</button></p>
      <details>
        <summary>HTML IFrame</summary>
        <code data-role="html-snippet"></code>
        <button data-action="copy-html">Copy</button>
      </details>
      <details>
        <summary>Jupyter IFrame</summary>
        <code data-role="jupyter-snippet"></code>
        <button data-action="copy-jupyter">Copy</button>
      </details>
    </div>`;

  const saveButton = element.querySelector('[data-action="save-snapshot"]') as HTMLButtonElement;
  const uploadInput = element.querySelector('[data-action="upload-snapshot"]') as HTMLInputElement;
  const publishButton = element.querySelector('[data-action="publish-snapshot"]') as HTMLButtonElement;
  const message = element.querySelector('.field-message') as HTMLElement;
  const shareResult = element.querySelector('.share-result') as HTMLElement;

  saveButton.addEventListener('click', handlers.onSave);
  publishButton.addEventListener('click', handlers.onPublish);
  uploadInput.addEventListener('change', () => {
    const file = uploadInput.files?.[0];
    if (file) handlers.onUpload(file);
    uploadInput.value = '';
  });

  const clipboard: Record<string, () => string> = {
    'copy-url': () => (element.querySelector('[data-role="share-url"]') as HTMLAnchorElement).href,
    'copy-html': () => textOf('html-snippet'),
    'copy-jupyter': () => textOf('jupyter-snippet'),
  };
  for (const [action, getText] of Object.entries(clipboard)) {
    const button = element.querySelector(`[data-action="${action}"]`) as HTMLButtonElement;
    button.addEventListener('click', () => {
      void navigator.clipboard?.writeText(getText());
    });
  }

  function textOf(role: string): string {
    return (element.querySelector(`[data-role="${role}"]`) as HTMLElement).textContent ?? '';
  }

  return {
    element,
    setBusy(busy) {
      saveButton.disabled = busy;
      publishButton.disabled = busy;
      uploadInput.disabled = busy;
    },
    showPublished(info) {
      message.hidden = true;
      shareResult.hidden = false;
      const link = element.querySelector('[data-role="share-url"]') as HTMLAnchorElement;
      link.href = info.url;
      link.textContent = info.url;
      (element.querySelector('[data-role="html-snippet"]') as HTMLElement).textContent =
        info.htmlSnippet;
      (element.querySelector('[data-role="jupyter-snippet"]') as HTMLElement).textContent =
        info.jupyterSnippet;
    },
    showError(text) {
      // server validation detail shown verbatim
      message.textContent = text;
      message.hidden = false;
    },
  };
}
