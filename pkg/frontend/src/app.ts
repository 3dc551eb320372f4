// Application shell: owns the session, the render model, and the panels.
// The engine owns layout and metrics; this file only displays them and
// forwards user intent to the API. At most one mutating request is in
// flight; every mutating control is disabled while it runs.

import { ApiClient, ApiError } from './api.js';
import { buildScene, hitTest, type Scene } from './scene.js';
import { draw } from './renderer.js';
import { createCustomizePanel, type CustomizePanel } from './panels/customize.js';
import { createExplorePanel, type ExplorePanel } from './panels/explore.js';
import { createGraphMenu, type GraphMenu } from './panels/graphmenu.js';
import { createInfoPanel, type InfoPanel } from './panels/info.js';
import { createPapersMenu, type PapersMenu } from './panels/papers.js';
import type { BootConfig, GraphModel, NodeModel, SnapshotDoc, StyleDoc } from './types.js';
import { ViewState } from './viewstate.js';

export class App {
  readonly view = new ViewState();
  model: GraphModel | null = null;
  scene: Scene | null = null;
  readonly readOnly: boolean;

  private name = '';
  private canvas!: HTMLCanvasElement;
  private info!: InfoPanel;
  private papers?: PapersMenu;
  private explore?: ExplorePanel;
  private customize?: CustomizePanel;
  private graphMenu?: GraphMenu;
  private statusLine!: HTMLElement;
  private doc: Document;

  constructor(
    private root: HTMLElement,
    private boot: BootConfig,
    private api: ApiClient = new ApiClient(),
  ) {
    this.doc = root.ownerDocument;
    this.readOnly = boot.mode === 'embed';
    this.buildDom();
  }

  /** Create or load the session, then render. */
  async start(): Promise<void> {
    try {
      const body = this.boot.shareId ? { share_id: this.boot.shareId } : {};
      const session = await this.api.createSession(body);
      this.applyModel(session.graph);
      this.fitToContent();
    } catch (error) {
      this.setStatus(describeError(error), 'error');
    }
  }

  // -- DOM ---------------------------------------------------------------

  private buildDom(): void {
    this.root.innerHTML = '';
    this.root.classList.add('citegraph-app');
    if (this.readOnly) this.root.classList.add('read-only');

    const main = this.doc.createElement('main');
    main.className = 'graph-view';
    this.canvas = this.doc.createElement('canvas');
    this.canvas.className = 'graph-canvas';
    this.canvas.width = 800;
    this.canvas.height = 600;
    main.appendChild(this.canvas);
    this.statusLine = this.doc.createElement('div');
    this.statusLine.className = 'status-line';
    this.statusLine.hidden = true;
    main.appendChild(this.statusLine);

    const side = this.doc.createElement('div');
    side.className = 'side-panels';
    this.info = createInfoPanel(this.doc);

    if (!this.readOnly) {
      this.papers = createPapersMenu(this.doc, (corpusId) => void this.seed(corpusId));
      this.explore = createExplorePanel(this.doc, (direction, strategy) =>
        void this.expand(direction, strategy),
      );
      this.customize = createCustomizePanel(this.doc, (delta) => void this.editStyle(delta));
      this.graphMenu = createGraphMenu(this.doc, {
        onSave: () => this.saveSnapshot(),
        onUpload: (file) => void this.uploadSnapshot(file),
        onPublish: () => void this.publish(),
      });
      side.append(
        this.papers.element,
        this.explore.element,
        this.info.element,
        this.customize.element,
        this.graphMenu.element,
      );
    } else {
      side.append(this.info.element);
    }

    this.root.append(main, side);
    this.bindCanvasEvents();
  }

  private bindCanvasEvents(): void {
    let dragging = false;
    let moved = false;
    let last = { x: 0, y: 0 };

    const toLocal = (event: MouseEvent) => {
      const rect = this.canvas.getBoundingClientRect();
      return { x: event.clientX - rect.left, y: event.clientY - rect.top };
    };

    this.canvas.addEventListener('mousedown', (event) => {
      dragging = true;
      moved = false;
      last = toLocal(event);
    });
    this.canvas.addEventListener('mousemove', (event) => {
      const point = toLocal(event);
      if (dragging) {
        this.view.panByScreen(point.x - last.x, point.y - last.y);
        moved = true;
        last = point;
        this.render();
        return;
      }
      const hit = this.scene ? hitTest(this.scene, this.view, point.x, point.y) : null;
      if (hit !== this.view.hover) {
        this.view.hover = hit;
        this.refreshInfo();
        this.render();
      }
    });
    this.canvas.addEventListener('mouseup', (event) => {
      const wasDrag = dragging && moved;
      dragging = false;
      if (wasDrag) return;
      const point = toLocal(event);
      this.select(this.scene ? hitTest(this.scene, this.view, point.x, point.y) : null);
    });
    this.canvas.addEventListener('mouseleave', () => {
      dragging = false;
      if (this.view.hover !== null) {
        this.view.hover = null;
        this.refreshInfo();
        this.render();
      }
    });
    this.canvas.addEventListener('wheel', (event) => {
      event.preventDefault();
      const point = toLocal(event);
      this.view.zoomBy(event.deltaY < 0 ? 1.15 : 1 / 1.15, point.x, point.y);
      this.render();
    });
  }

  // -- state -------------------------------------------------------------

  select(corpusId: number | null): void {
    this.view.selection = corpusId;
    this.explore?.setSelection(corpusId);
    this.refreshInfo();
    this.render();
  }

  private applyModel(model: GraphModel): void {
    this.model = model;
    this.customize?.setStyle(model.style);
    this.refreshInfo();
    this.render();
  }

  private refreshInfo(): void {
    this.info.update(this.nodeById(this.view.hover), this.nodeById(this.view.selection));
  }

  private nodeById(id: number | null): NodeModel | null {
    if (id === null || !this.model) return null;
    return this.model.nodes.find((n) => n.corpus_id === id) ?? null;
  }

  render(): void {
    if (!this.model) return;
    this.scene = buildScene(this.model, this.view);
    draw(this.canvas, this.scene, this.view);
  }

  private fitToContent(): void {
    if (!this.model || this.model.nodes.length === 0) return;
    const xs = this.model.nodes.map((n) => n.x);
    const ys = this.model.nodes.map((n) => n.y);
    this.view.centerOn((Math.min(...xs) + Math.max(...xs)) / 2, (Math.min(...ys) + Math.max(...ys)) / 2);
    this.render();
  }

  private setStatus(text: string | null, kind: 'error' | 'notice' = 'notice'): void {
    if (text === null) {
      this.statusLine.hidden = true;
      return;
    }
    this.statusLine.hidden = false;
    this.statusLine.className = `status-line ${kind}`;
    this.statusLine.textContent = text;
  }

  // -- mutations -----------------------------------------------------------

  private setPending(pending: boolean): void {
    this.view.pending = pending;
    this.papers?.setBusy(pending);
    this.explore?.setBusy(pending);
    this.customize?.setBusy(pending);
    this.graphMenu?.setBusy(pending);
  }

  private async mutate<T>(operation: () => Promise<T>): Promise<T | null> {
    if (this.view.pending) return null; // no double-submit
    this.setPending(true);
    try {
      return await operation();
    } finally {
      this.setPending(false);
    }
  }

  async seed(corpusId: number): Promise<void> {
    if (!this.model) return;
    const existing = this.nodeById(corpusId);
    if (existing) {
      this.papers?.showNotice('Already in graph.');
      this.view.centerOn(existing.x, existing.y);
      this.select(corpusId);
      return;
    }
    await this.mutate(async () => {
      try {
        const response = await this.api.seed(this.model!.session_id, corpusId);
        this.applyModel(response.graph);
        this.papers?.clear();
        const node = this.nodeById(response.corpus_id);
        if (node) {
          this.view.centerOn(node.x, node.y);
          this.select(node.corpus_id);
        }
      } catch (error) {
        if (error instanceof ApiError && error.status === 404) {
          this.papers?.showError('CorpusID not found.');
        } else {
          this.papers?.showError(describeError(error));
        }
      }
    });
  }

  async expand(direction: 'references' | 'citations', strategy: string): Promise<void> {
    const node = this.view.selection;
    if (!this.model || node === null) return;
    await this.mutate(async () => {
      try {
        this.explore?.clearStatus();
        const response = await this.api.expand(this.model!.session_id, node, direction, strategy);
        const parent = this.nodeById(node);
        this.applyModel(response.graph);
        this.explore?.setExhausted(direction, response.result.exhausted);
        this.panToExpansion(parent, response.result.added_papers);
      } catch (error) {
        if (error instanceof ApiError && error.status === 429) {
          this.explore?.showCountdown(error.retryAfterSeconds || 30);
        } else if (error instanceof ApiError && error.status === 409) {
          // busy: controls are already disabled; nothing to do
        } else if (error instanceof ApiError && error.status === 502) {
          this.explore?.showError(describeError(error), true);
        } else {
          this.explore?.showError(describeError(error), false);
        }
      }
    });
  }

  /** Gentle pan keeping the parent and its new children visible. */
  private panToExpansion(parent: NodeModel | null, added: number[]): void {
    if (!this.model || added.length === 0) return;
    const children = added
      .map((id) => this.nodeById(id))
      .filter((n): n is NodeModel => n !== null);
    if (children.length === 0) return;
    const points = parent ? [parent, ...children] : children;
    const cx = points.reduce((acc, n) => acc + n.x, 0) / points.length;
    const cy = points.reduce((acc, n) => acc + n.y, 0) / points.length;
    this.view.centerOn(cx, cy);
    this.render();
  }

  async editStyle(delta: Partial<StyleDoc>): Promise<void> {
    if (!this.model) return;
    // optimistic: restyle immediately, reconcile with the server response
    const previous = this.model.style;
    this.model.style = { ...previous, ...delta };
    this.render();
    await this.mutate(async () => {
      try {
        const response = await this.api.patchStyle(this.model!.session_id, delta);
        this.model!.style = response.style;
        this.customize?.setStyle(response.style);
        this.render();
      } catch (error) {
        this.model!.style = previous;
        this.customize?.setStyle(previous);
        this.render();
        this.customize?.showError(describeError(error));
      }
    });
  }

  // -- snapshots ---------------------------------------------------------

  snapshotDoc(): SnapshotDoc {
    if (!this.model) throw new Error('no model loaded');
    return {
      version: this.model.version,
      name: this.name,
      created_at: new Date().toISOString().replace(/\.\d{3}Z$/, 'Z'),
      nodes: this.model.nodes.map((n) => ({
        corpus_id: n.corpus_id,
        title: n.title,
        abstract: n.abstract,
        authors: n.authors,
        year: n.year,
        venue: n.venue,
        citation_count: n.citation_count,
        url: n.url,
        x: n.x,
        y: n.y,
        pinned: n.pinned,
      })),
      edges: this.model.edges,
      style: this.model.style,
      cursors: this.model.cursors,
    };
  }

  private saveSnapshot(): void {
    if (!this.model) return;
    const text = JSON.stringify(this.snapshotDoc(), null, 2);
    const blob = new Blob([text], { type: 'application/json' });
    const link = this.doc.createElement('a');
    link.href = URL.createObjectURL(blob);
    link.download = (this.name || 'exploration') + '.citegraph.json';
    link.click();
    URL.revokeObjectURL(link.href);
  }

  async uploadSnapshot(file: File): Promise<void> {
    await this.mutate(async () => {
      try {
        const text = await file.text();
        const doc = JSON.parse(text);
        const session = await this.api.createSession(doc);
        this.name = typeof doc.name === 'string' ? doc.name : '';
        this.view.selection = null;
        this.view.hover = null;
        this.explore?.setSelection(null);
        this.applyModel(session.graph);
        this.fitToContent();
        this.setStatus(null);
      } catch (error) {
        if (error instanceof SyntaxError) {
          // parse position comes straight from the JSON parser
          this.graphMenu?.showError(`Snapshot is not valid JSON: ${error.message}`);
        } else {
          this.graphMenu?.showError(describeError(error));
        }
      }
    });
  }

  async publish(): Promise<void> {
    if (!this.model) return;
    await this.mutate(async () => {
      try {
        const response = await this.api.publish(this.snapshotDoc());
        const origin = this.doc.defaultView?.location?.origin ?? '';
        const embedUrl = `${origin}/embed/${response.share_id}`;
        this.graphMenu?.showPublished({
          url: response.url,
          shareId: response.share_id,
          htmlSnippet: iframeSnippet(embedUrl),
          jupyterSnippet: iframeSnippet(embedUrl),
        });
      } catch (error) {
        this.graphMenu?.showError(describeError(error));
      }
    });
  }
}

export function iframeSnippet(src: string, width = 800, height = 600): string {
  return `<iframe src="${src}" width="${width}" height="${height}" frameborder="0" title="citation network"></iframe>`;
}

export function describeError(error: unknown): string {
  if (error instanceof ApiError) {
    const path = error.detail['path'];
    return typeof path === 'string' ? `${error.message}` : error.message;
  }
  return error instanceof Error ? error.message : String(error);
}
