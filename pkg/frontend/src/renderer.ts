// Canvas drawing. Node radii are screen pixels (the style ranges are px);
// positions come from the engine and are transformed by the camera only.

import type { Scene } from './scene.js';
import type { ViewState } from './viewstate.js';

const EDGE_COLOR = '#b0b8c4';
const LABEL_COLOR = '#2a2f3a';
const SELECT_COLOR = '#e4572e';
const ARROW_SIZE = 6;

export function draw(
  canvas: HTMLCanvasElement,
  scene: Scene,
  view: ViewState,
): void {
  const ctx = canvas.getContext('2d');
  if (!ctx) return; // test environments have no 2D context

  const { width, height } = view.viewport;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.save();

  ctx.fillStyle = '#fafbfc';
  ctx.fillRect(0, 0, width, height);

  ctx.strokeStyle = EDGE_COLOR;
  ctx.fillStyle = EDGE_COLOR;
  ctx.lineWidth = 1;
  for (const edge of scene.edges) {
    const from = view.worldToScreen(edge.sx, edge.sy);
    const to = view.worldToScreen(edge.tx, edge.ty);
    ctx.beginPath();
    ctx.moveTo(from.x, from.y);
    ctx.lineTo(to.x, to.y);
    ctx.stroke();
    if (scene.showArrows) {
      drawArrowhead(ctx, from, to, edge.targetRadius);
    }
  }

  for (const node of scene.nodes) {
    const center = view.worldToScreen(node.x, node.y);
    ctx.beginPath();
    ctx.arc(center.x, center.y, node.radius, 0, Math.PI * 2);
    ctx.fillStyle = node.color;
    ctx.fill();
    if (node.selected || node.hovered) {
      ctx.lineWidth = node.selected ? 2.5 : 1.5;
      ctx.strokeStyle = SELECT_COLOR;
      ctx.stroke();
    }
  }

  ctx.fillStyle = LABEL_COLOR;
  ctx.font = '12px system-ui, sans-serif';
  ctx.textAlign = 'left';
  ctx.textBaseline = 'middle';
  for (const node of scene.nodes) {
    if (node.label === null) continue;
    const center = view.worldToScreen(node.x, node.y);
    ctx.fillText(node.label, center.x + node.radius + 4, center.y);
  }

  ctx.restore();
}

function drawArrowhead(
  ctx: CanvasRenderingContext2D,
  from: { x: number; y: number },
  to: { x: number; y: number },
  targetRadius: number,
): void {
  const dx = to.x - from.x;
  const dy = to.y - from.y;
  const length = Math.hypot(dx, dy);
  if (length < 1e-6) return;
  const ux = dx / length;
  const uy = dy / length;
  // tip sits on the target circle's rim
  const tipX = to.x - ux * targetRadius;
  const tipY = to.y - uy * targetRadius;
  ctx.beginPath();
  ctx.moveTo(tipX, tipY);
  ctx.lineTo(tipX - ux * ARROW_SIZE - uy * (ARROW_SIZE / 2), tipY - uy * ARROW_SIZE + ux * (ARROW_SIZE / 2));
  ctx.lineTo(tipX - ux * ARROW_SIZE + uy * (ARROW_SIZE / 2), tipY - uy * ARROW_SIZE - ux * (ARROW_SIZE / 2));
  ctx.closePath();
  ctx.fill();
}
