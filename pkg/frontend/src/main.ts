// Entry point: decides the boot mode from an injected config (embed pages)
// or the URL path (/s/{share_id} opens a shared exploration).

import { App } from './app.js';
import type { BootConfig } from './types.js';

declare global {
  interface Window {
    CITEGRAPH_BOOT?: BootConfig & { snapshotUrl?: string };
    citegraphApp?: App;
  }
}

export function bootConfigFromLocation(pathname: string): BootConfig {
  const shared = /^\/s\/([A-Za-z0-9_-]{12})$/.exec(pathname);
  if (shared) {
    return { mode: 'app', shareId: shared[1] };
  }
  return { mode: 'app' };
}

function mount(): void {
  const root = document.getElementById('app');
  if (!root) return;
  const boot = window.CITEGRAPH_BOOT ?? bootConfigFromLocation(window.location.pathname);
  const app = new App(root, boot);
  window.citegraphApp = app;
  void app.start();
}

if (typeof document !== 'undefined' && document.getElementById('app')) {
  mount();
}
