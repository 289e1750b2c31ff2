import type { Bundle, BundleFeature } from './bundle.js';
import { formatG, formatSig4 } from './format.js';
import { classColor, type PanelGrid, type PanelModel } from './panels.js';
import type { ExplorerState } from './state.js';

const SVG_NS = 'http://www.w3.org/2000/svg';
const NEUTRAL = '#F7F7F7';
const PANEL_W = 340;
const PANEL_H = 300;

const ringPath = (
  ring: number[][],
  extent: [number, number, number, number],
): string => {
  const [x0, y0, x1, y1] = extent;
  const sx = PANEL_W / (x1 - x0);
  const sy = PANEL_H / (y1 - y0);
  const parts = ring.map(([x, y], i) => {
    const px = ((x - x0) * sx).toFixed(2);
    const py = ((y1 - y) * sy).toFixed(2);
    return `${i === 0 ? 'M' : 'L'}${px},${py}`;
  });
  return `${parts.join('')}Z`;
};

const featurePath = (
  feature: BundleFeature,
  bundle: Bundle,
  fill: string,
): SVGPathElement => {
  const path = document.createElementNS(SVG_NS, 'path');
  const d = feature.rings.map((ring) => ringPath(ring, bundle.extent)).join('');
  path.setAttribute('d', d);
  path.setAttribute('fill', fill);
  path.setAttribute('fill-rule', 'evenodd');
  path.setAttribute('stroke', '#999999');
  path.setAttribute('stroke-width', '0.4');
  path.dataset.code = String(feature.code);
  return path;
};

export interface HoverHandlers {
  enter: (code: number, event: MouseEvent) => void;
  leave: () => void;
}

const renderPanel = (
  bundle: Bundle,
  grid: PanelGrid,
  panel: PanelModel,
  handlers: HoverHandlers,
): HTMLElement => {
  const cell = document.createElement('div');
  cell.className = 'panel';

  const caption = document.createElement('div');
  caption.className = 'panel-caption';
  const medianText = panel.median === null ? 'empty' : formatG(panel.median, 6);
  caption.textContent = `median ${medianText}, n=${panel.count}`;
  cell.appendChild(caption);

  const svg = document.createElementNS(SVG_NS, 'svg');
  svg.setAttribute('viewBox', `0 0 ${PANEL_W} ${PANEL_H}`);
  svg.setAttribute('width', String(PANEL_W));
  svg.setAttribute('height', String(PANEL_H));
  const members = new Set(panel.memberIndices);
  bundle.features.forEach((feature, index) => {
    const fill = members.has(index)
      ? classColor(bundle, grid.classes[index])
      : NEUTRAL;
    const path = featurePath(feature, bundle, fill);
    path.addEventListener('mouseenter', (ev) => handlers.enter(feature.code, ev));
    path.addEventListener('mouseleave', () => handlers.leave());
    svg.appendChild(path);
  });
  cell.appendChild(svg);
  return cell;
};

export const renderGrid = (
  container: HTMLElement,
  bundle: Bundle,
  state: ExplorerState,
  grid: PanelGrid,
  handlers: HoverHandlers,
): void => {
  container.textContent = '';
  // rank-style y variables count rank 1 as the top of the scale, so the
  // low shingle is displayed in the top row; otherwise high sits on top
  const lowFirst = bundle.variables[state.givenY].kind === 'rank_index';
  const rows = [...Array(state.kY).keys()];
  if (!lowFirst) {
    rows.reverse();
  }
  for (const j of rows) {
    const rowEl = document.createElement('div');
    rowEl.className = 'panel-row';
    for (let i = 0; i < state.kX; i++) {
      const panel = grid.panels.find((p) => p.xIndex === i && p.yIndex === j);
      if (panel) {
        rowEl.appendChild(renderPanel(bundle, grid, panel, handlers));
      }
    }
    container.appendChild(rowEl);
  }
};

export const renderLegend = (
  container: HTMLElement,
  bundle: Bundle,
  grid: PanelGrid,
  state: ExplorerState,
): void => {
  container.textContent = '';
  const title = document.createElement('span');
  title.className = 'legend-title';
  title.textContent = grid.reciprocal
    ? `${state.response} rate (events per population): low to high`
    : `${state.response}: low to high`;
  container.appendChild(title);
  bundle.palette.forEach((color) => {
    const sw = document.createElement('span');
    sw.className = 'swatch';
    sw.style.background = color;
    container.appendChild(sw);
  });
  const cuts = document.createElement('span');
  cuts.className = 'legend-cuts';
  cuts.textContent = `cuts ${grid.cuts.map((c) => formatSig4(c)).join(' | ')}`;
  container.appendChild(cuts);
};
