// Build a drawable scene from a render model. Coordinates are the engine's,
// untouched: the UI never computes layout or metrics.

import { nodeColor, nodeRadius } from './style.js';
import type { GraphModel, NodeModel } from './types.js';
import type { ViewState } from './viewstate.js';

// beyond this many nodes, labels are culled to hovered/selected only
export const LABEL_CULL_THRESHOLD = 200;

export interface SceneNode {
  id: number;
  x: number;
  y: number;
  radius: number;
  color: string;
  label: string | null;
  selected: boolean;
  hovered: boolean;
}

export interface SceneEdge {
  source: number;
  target: number;
  sx: number;
  sy: number;
  tx: number;
  ty: number;
  targetRadius: number;
}

export interface Scene {
  nodes: SceneNode[];
  edges: SceneEdge[];
  showArrows: boolean;
}

export function buildScene(model: GraphModel, view: ViewState): Scene {
  const style = model.style;
  const cullLabels = model.nodes.length > LABEL_CULL_THRESHOLD;
  const byId = new Map<number, NodeModel>();
  for (const node of model.nodes) {
    byId.set(node.corpus_id, node);
  }

  const nodes: SceneNode[] = model.nodes.map((node) => {
    const selected = view.selection === node.corpus_id;
    const hovered = view.hover === node.corpus_id;
    const wantLabel = style.show_labels && (!cullLabels || selected || hovered);
    return {
      id: node.corpus_id,
      x: node.x,
      y: node.y,
      radius: nodeRadius(node, style),
      color: nodeColor(node, style),
      label: wantLabel ? truncateLabel(node.title, style.label_max_chars) : null,
      selected,
      hovered,
    };
  });

  const radiusById = new Map(nodes.map((n) => [n.id, n.radius]));
  const edges: SceneEdge[] = model.edges.flatMap((edge) => {
    const source = byId.get(edge.source);
    const target = byId.get(edge.target);
    if (!source || !target) return [];
    return [
      {
        source: edge.source,
        target: edge.target,
        sx: source.x,
        sy: source.y,
        tx: target.x,
        ty: target.y,
        targetRadius: radiusById.get(edge.target) ?? 0,
      },
    ];
  });

  return { nodes, edges, showArrows: style.show_edge_direction };
}

export function truncateLabel(title: string, maxChars: number): string {
  if (title.length <= maxChars) return title;
  return title.slice(0, Math.max(maxChars - 1, 1)) + '…';
}

/** Topmost node under a screen point, honoring draw order. */
export function hitTest(scene: Scene, view: ViewState, sx: number, sy: number): number | null {
  const world = view.screenToWorld(sx, sy);
  for (let i = scene.nodes.length - 1; i >= 0; i--) {
    const node = scene.nodes[i];
    const hitRadius = node.radius / view.camera.zoom + 2 / view.camera.zoom;
    const dx = world.x - node.x;
    const dy = world.y - node.y;
    if (dx * dx + dy * dy <= hitRadius * hitRadius) {
      return node.id;
    }
  }
  return null;
}
