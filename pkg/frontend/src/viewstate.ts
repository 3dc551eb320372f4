// Camera, selection, and interaction state. Zoom is clamped to [0.05, 20].

export const MIN_ZOOM = 0.05;
export const MAX_ZOOM = 20;

export interface Camera {
  x: number; // world coordinate at the viewport center
  y: number;
  zoom: number;
}

export class ViewState {
  camera: Camera = { x: 0, y: 0, zoom: 1 };
  selection: number | null = null;
  hover: number | null = null;
  pending = false; // a mutating request is in flight
  viewport = { width: 800, height: 600 };

  setViewport(width: number, height: number): void {
    this.viewport = { width, height };
  }

  zoomBy(factor: number, screenX?: number, screenY?: number): void {
    const anchor =
      screenX !== undefined && screenY !== undefined
        ? this.screenToWorld(screenX, screenY)
        : { x: this.camera.x, y: this.camera.y };
    const next = clampZoom(this.camera.zoom * factor);
    const applied = next / this.camera.zoom;
    // keep the anchor point fixed on screen while zooming
    this.camera.x = anchor.x - (anchor.x - this.camera.x) / applied;
    this.camera.y = anchor.y - (anchor.y - this.camera.y) / applied;
    this.camera.zoom = next;
  }

  panByScreen(dx: number, dy: number): void {
    this.camera.x -= dx / this.camera.zoom;
    this.camera.y -= dy / this.camera.zoom;
  }

  centerOn(worldX: number, worldY: number): void {
    this.camera.x = worldX;
    this.camera.y = worldY;
  }

  worldToScreen(x: number, y: number): { x: number; y: number } {
    return {
      x: (x - this.camera.x) * this.camera.zoom + this.viewport.width / 2,
      y: (y - this.camera.y) * this.camera.zoom + this.viewport.height / 2,
    };
  }

  screenToWorld(sx: number, sy: number): { x: number; y: number } {
    return {
      x: (sx - this.viewport.width / 2) / this.camera.zoom + this.camera.x,
      y: (sy - this.viewport.height / 2) / this.camera.zoom + this.camera.y,
    };
  }
}

export function clampZoom(zoom: number): number {
  return Math.min(Math.max(zoom, MIN_ZOOM), MAX_ZOOM);
}
