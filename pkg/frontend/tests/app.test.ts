// Integration tests: the app driven against real recorded API payloads
// (frozen from the replay-mode server) via a fetch stub.

import { afterEach, beforeEach, describe, expect, it, vi } from 'vitest';
import { App } from '../src/app.js';
import type { GraphModel, SnapshotDoc } from '../src/types.js';
import flow from './fixtures/ui_flow.json';

type Flow = {
  session_seeded: { session_id: string; graph: GraphModel };
  expand_refs_1: { result: any; graph: GraphModel };
  expand_refs_2: { result: any; graph: GraphModel };
  expand_cites: { result: any; graph: GraphModel };
  graph_final: GraphModel;
  publish_response: { share_id: string; url: string };
  snapshot_bytes: string;
  session_reopened: { session_id: string; graph: GraphModel };
};

const payloads = flow as unknown as Flow;
const ANCHOR = 9999;

class FakeServer {
  calls: string[] = [];
  initialGraph: GraphModel;
  force429 = false;
  private refsQueue: Array<{ result: any; graph: GraphModel }>;
  private citesQueue: Array<{ result: any; graph: GraphModel }>;

  constructor(initial?: GraphModel) {
    this.initialGraph = initial ?? {
      ...payloads.session_seeded.graph,
      nodes: [],
      edges: [],
      cursors: [],
    };
    const exhaustedThird = structuredClone(payloads.expand_refs_2);
    exhaustedThird.result = { ...exhaustedThird.result, added_papers: [], added_edges: [], exhausted: true };
    this.refsQueue = [
      structuredClone(payloads.expand_refs_1),
      structuredClone(payloads.expand_refs_2),
      exhaustedThird,
    ];
    this.citesQueue = [structuredClone(payloads.expand_cites)];
  }

  install(): void {
    vi.stubGlobal('fetch', (input: any, init?: RequestInit) =>
      Promise.resolve(this.handle(String(input), init)),
    );
  }

  private json(body: unknown, status = 200): Response {
    return new Response(JSON.stringify(body), {
      status,
      headers: { 'content-type': 'application/json' },
    });
  }

  private handle(url: string, init?: RequestInit): Response {
    const method = init?.method ?? 'GET';
    this.calls.push(`${method} ${url}`);
    const body = init?.body ? JSON.parse(String(init.body)) : {};

    if (method === 'POST' && /\/api\/sessions$/.test(url)) {
      if (body.share_id || body.version) {
        return this.json(payloads.session_reopened, 201);
      }
      return this.json({ session_id: 'sess-test', graph: this.initialGraph }, 201);
    }
    if (method === 'POST' && /\/seed$/.test(url)) {
      if (body.corpus_id === ANCHOR) {
        return this.json({ corpus_id: ANCHOR, graph: payloads.session_seeded.graph });
      }
      return this.json(
        { code: 'not_found', message: `CorpusID ${body.corpus_id} not found upstream`, detail: {} },
        404,
      );
    }
    if (method === 'POST' && /\/expand$/.test(url)) {
      if (this.force429) {
        return this.json(
          { code: 'rate_limited', message: 'saturated', detail: { retry_after_seconds: 3 } },
          429,
        );
      }
      const queue = body.direction === 'references' ? this.refsQueue : this.citesQueue;
      const next = queue.length > 1 ? queue.shift()! : queue[0];
      return this.json(next);
    }
    if (method === 'PATCH' && /\/style$/.test(url)) {
      return this.json({ style: { ...payloads.graph_final.style, ...body }, ignored: [] });
    }
    if (method === 'POST' && /\/api\/snapshots$/.test(url)) {
      return this.json(payloads.publish_response, 201);
    }
    if (method === 'GET' && /\/api\/snapshots\//.test(url)) {
      return new Response(payloads.snapshot_bytes, {
        status: 200,
        headers: { 'content-type': 'application/json' },
      });
    }
    return this.json({ code: 'http_error', message: `no route ${url}`, detail: {} }, 404);
  }
}

async function flush(): Promise<void> {
  for (let i = 0; i < 4; i++) {
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
}

function mountApp(server: FakeServer, boot = { mode: 'app' as const }): Promise<App> & { app: App } {
  server.install();
  const root = document.createElement('div');
  document.body.appendChild(root);
  const app = new App(root, boot);
  const started = app.start().then(() => app) as Promise<App> & { app: App };
  started.app = app;
  return started;
}

beforeEach(() => {
  document.body.innerHTML = '';
});

afterEach(() => {
  vi.unstubAllGlobals();
  vi.restoreAllMocks();
});

describe('papers menu', () => {
  it('entering a fixture CorpusID renders the node', async () => {
    const server = new FakeServer();
    const app = await mountApp(server);
    const input = document.querySelector('.papers-menu input') as HTMLInputElement;
    input.value = '9999';
    (document.querySelector('.papers-menu') as HTMLFormElement).dispatchEvent(
      new Event('submit', { cancelable: true }),
    );
    await flush();
    expect(app.scene?.nodes.map((n) => n.id)).toContain(ANCHOR);
    expect(app.view.selection).toBe(ANCHOR);
  });

  it('rejects non-numeric input with no network call', async () => {
    const server = new FakeServer();
    await mountApp(server);
    const before = server.calls.length;
    const input = document.querySelector('.papers-menu input') as HTMLInputElement;
    input.value = 'abc';
    (document.querySelector('.papers-menu') as HTMLFormElement).dispatchEvent(
      new Event('submit', { cancelable: true }),
    );
    await flush();
    const message = document.querySelector('.papers-menu .field-message') as HTMLElement;
    expect(message.hidden).toBe(false);
    expect(message.textContent).toMatch(/positive integer/i);
    expect(server.calls.length).toBe(before);
  });

  it('unknown CorpusID shows not-found inline', async () => {
    const server = new FakeServer();
    const app = await mountApp(server);
    await app.seed(77777);
    const message = document.querySelector('.papers-menu .field-message') as HTMLElement;
    expect(message.textContent).toBe('CorpusID not found.');
  });

  it('duplicate id centers the existing node without a network call', async () => {
    const server = new FakeServer(payloads.session_seeded.graph);
    const app = await mountApp(server);
    const before = server.calls.length;
    await app.seed(ANCHOR);
    expect(server.calls.length).toBe(before);
    const message = document.querySelector('.papers-menu .field-message') as HTMLElement;
    expect(message.textContent).toBe('Already in graph.');
    const node = payloads.session_seeded.graph.nodes[0];
    expect(app.view.camera.x).toBe(node.x);
    expect(app.view.camera.y).toBe(node.y);
  });
});

describe('exploration dropdown', () => {
  it('expand renders at most 5 vertically aligned children', async () => {
    const server = new FakeServer(payloads.session_seeded.graph);
    const app = await mountApp(server);
    app.select(ANCHOR);
    await app.expand('references', 'upstream_order');
    const added: number[] = payloads.expand_refs_1.result.added_papers;
    expect(added.length).toBeLessThanOrEqual(5);
    const drawn = app.scene!.nodes.filter((n) => added.includes(n.id));
    expect(drawn).toHaveLength(added.length);
    const xs = new Set(drawn.map((n) => n.x));
    expect(xs.size).toBe(1);
    const ys = drawn.map((n) => n.y).sort((a, b) => a - b);
    for (let i = 1; i < ys.length; i++) {
      expect(ys[i] - ys[i - 1]).toBeCloseTo(40, 6);
    }
  });

  it('shows the no-more-results state when exhausted', async () => {
    const server = new FakeServer(payloads.session_seeded.graph);
    const app = await mountApp(server);
    app.select(ANCHOR);
    await app.expand('references', 'upstream_order');
    await app.expand('references', 'upstream_order');
    await app.expand('references', 'upstream_order');
    const button = document.querySelector('[data-action="expand-references"]') as HTMLButtonElement;
    expect(button.disabled).toBe(true);
    expect(button.textContent).toMatch(/no more references/i);
  });

  it('ignores expands while one is in flight', async () => {
    const server = new FakeServer(payloads.session_seeded.graph);
    const app = await mountApp(server);
    app.select(ANCHOR);
    const first = app.expand('references', 'upstream_order');
    const second = app.expand('references', 'upstream_order');
    await Promise.all([first, second]);
    const expandCalls = server.calls.filter((c) => c.includes('/expand'));
    expect(expandCalls).toHaveLength(1);
  });

  it('429 shows a countdown from retry-after', async () => {
    const server = new FakeServer(payloads.session_seeded.graph);
    const app = await mountApp(server);
    server.force429 = true;
    app.select(ANCHOR);
    await app.expand('references', 'upstream_order');
    const status = document.querySelector('.explore-status') as HTMLElement;
    expect(status.hidden).toBe(false);
    expect(status.textContent).toMatch(/retry in 3s/i);
  });
});

describe('info panel', () => {
  it('shows the seven metadata fields for a full node', async () => {
    const server = new FakeServer(payloads.session_seeded.graph);
    const app = await mountApp(server);
    app.select(ANCHOR);
    const panel = document.querySelector('.info-panel') as HTMLElement;
    const field = (name: string) =>
      (panel.querySelector(`[data-field="${name}"]`) as HTMLElement).textContent;
    const node = payloads.session_seeded.graph.nodes[0];
    expect(field('title')).toBe(node.title);
    expect(field('abstract')).toBe(node.abstract);
    expect(field('authors')).toBe(node.authors.join(', '));
    expect(field('citation_count')).toBe(String(node.citation_count));
    expect(field('venue')).toBe(node.venue);
    expect(field('year')).toBe(String(node.year));
    expect(field('url')).toBe(node.url);
    const link = panel.querySelector('[data-field="url"]') as HTMLAnchorElement;
    expect(link.target).toBe('_blank');
  });

  it('renders an em dash for missing optional fields', async () => {
    const server = new FakeServer(payloads.expand_refs_1.graph);
    const app = await mountApp(server);
    const bare = payloads.expand_refs_1.graph.nodes.find((n) => n.abstract === null)!;
    app.select(bare.corpus_id);
    const panel = document.querySelector('.info-panel') as HTMLElement;
    expect((panel.querySelector('[data-field="abstract"]') as HTMLElement).textContent).toBe('—');
  });

  it('hover takes precedence and reverts to selection', async () => {
    const server = new FakeServer(payloads.expand_refs_1.graph);
    const app = await mountApp(server);
    const [a, b] = payloads.expand_refs_1.graph.nodes;
    app.select(a.corpus_id);
    app.view.hover = b.corpus_id;
    (app as any).refreshInfo();
    const title = () =>
      (document.querySelector('[data-field="title"]') as HTMLElement).textContent;
    expect(title()).toBe(b.title);
    app.view.hover = null;
    (app as any).refreshInfo();
    expect(title()).toBe(a.title);
  });
});

describe('publish and reopen', () => {
  it('publish surfaces the share URL and embed snippets', async () => {
    const server = new FakeServer(payloads.graph_final);
    const app = await mountApp(server);
    await app.publish();
    const link = document.querySelector('[data-role="share-url"]') as HTMLAnchorElement;
    expect(link.textContent).toBe(payloads.publish_response.url);
    const html = document.querySelector('[data-role="html-snippet"]') as HTMLElement;
    expect(html.textContent).toContain(`/embed/${payloads.publish_response.share_id}`);
    expect(html.textContent).toContain('width="800"');
    const jupyter = document.querySelector('[data-role="jupyter-snippet"]') as HTMLElement;
    expect(jupyter.textContent).toContain('<iframe');
  });

  it('opening /s/{id} in a fresh context renders identical node/edge counts', async () => {
    const server = new FakeServer(payloads.graph_final);
    const app = await mountApp(server);
    await app.publish();
    const published: SnapshotDoc = JSON.parse(payloads.snapshot_bytes);

    const reopened = await mountApp(server, {
      mode: 'app',
      shareId: payloads.publish_response.share_id,
    } as any);
    expect(reopened.model!.nodes).toHaveLength(published.nodes.length);
    expect(reopened.model!.edges).toHaveLength(published.edges.length);
    expect(reopened.scene!.nodes).toHaveLength(published.nodes.length);
    expect(app.model!.nodes).toHaveLength(published.nodes.length);
  });

  it('snapshot document round-trips the render model', async () => {
    const server = new FakeServer(payloads.graph_final);
    const app = await mountApp(server);
    const doc = app.snapshotDoc();
    expect(doc.version).toBe(1);
    expect(doc.nodes).toHaveLength(payloads.graph_final.nodes.length);
    expect(doc.edges).toEqual(payloads.graph_final.edges);
    expect(doc.cursors).toEqual(payloads.graph_final.cursors);
    expect(new Set(Object.keys(doc.nodes[0]))).toEqual(
      new Set(['corpus_id', 'title', 'abstract', 'authors', 'year', 'venue',
               'citation_count', 'url', 'x', 'y', 'pinned']),
    );
  });
});

describe('embed mode', () => {
  it('shows no mutating controls', async () => {
    const server = new FakeServer();
    const app = await mountApp(server, {
      mode: 'embed',
      shareId: payloads.publish_response.share_id,
    } as any);
    expect(app.readOnly).toBe(true);
    const root = document.querySelector('.citegraph-app') as HTMLElement;
    expect(root.classList.contains('read-only')).toBe(true);
    expect(root.querySelectorAll('button')).toHaveLength(0);
    expect(root.querySelectorAll('input')).toHaveLength(0);
    expect(root.querySelectorAll('select')).toHaveLength(0);
    expect(root.querySelector('.info-panel')).not.toBeNull();
    expect(app.model!.nodes.length).toBeGreaterThan(0);
  });
});

describe('style edits', () => {
  it('applies optimistically and reconciles with the server', async () => {
    const server = new FakeServer(payloads.graph_final);
    const app = await mountApp(server);
    await app.editStyle({ node_size_attribute: 'pagerank' });
    expect(app.model!.style.node_size_attribute).toBe('pagerank');
    const select = document.querySelector('[data-role="size-attribute"]') as HTMLSelectElement;
    expect(select.value).toBe('pagerank');
    expect(server.calls.some((c) => c.startsWith('PATCH'))).toBe(true);
  });
});
