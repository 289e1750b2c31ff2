import { parseBundle, SchemaMismatchError, type Bundle } from './bundle.js';
import { recomputePanels } from './panels.js';
import { renderGrid, renderLegend } from './render.js';
import {
  defaultState,
  K_CHOICES,
  OVERLAP_MAX,
  OVERLAP_STEP,
  withUpdate,
  type ExplorerState,
} from './state.js';
import { hoverInspect } from './tooltip.js';

const el = (id: string): HTMLElement => {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node;
};

const showBanner = (message: string): void => {
  const banner = el('banner');
  banner.textContent = message;
  banner.style.display = 'block';
};

class App {
  private readonly bundle: Bundle;
  private state: ExplorerState;

  constructor(bundle: Bundle) {
    this.bundle = bundle;
    this.state = defaultState(bundle);
  }

  start(): void {
    this.buildControls();
    this.refresh();
  }

  private apply(patch: Partial<ExplorerState>): void {
    try {
      this.state = withUpdate(this.state, patch, this.bundle);
    } catch (err) {
      if (err instanceof RangeError) {
        const status = el('status');
        status.textContent = err.message;
        window.setTimeout(() => {
          status.textContent = '';
        }, 2500);
        this.buildControls();
        return;
      }
      throw err;
    }
    this.refresh();
  }

  private refresh(): void {
    const grid = recomputePanels(this.state, this.bundle);
    renderGrid(el('grid'), this.bundle, this.state, grid, {
      enter: (code, ev) => {
        this.state = { ...this.state, hover: code };
        const tip = hoverInspect(code, this.state, this.bundle, grid);
        const tipEl = el('tooltip');
        if (tip) {
          tipEl.innerHTML =
            `<b>${tip.name} (${tip.code})</b> &mdash; ${tip.region}<br>` +
            `${tip.response.variable}: ${tip.response.value}<br>` +
            `${tip.givenX.variable}: ${tip.givenX.value}<br>` +
            `${tip.givenY.variable}: ${tip.givenY.value}<br>` +
            `color class ${tip.colorClass}`;
          tipEl.style.display = 'block';
          tipEl.style.left = `${ev.pageX + 12}px`;
          tipEl.style.top = `${ev.pageY + 12}px`;
        }
      },
      leave: () => {
        this.state = { ...this.state, hover: null };
        el('tooltip').style.display = 'none';
      },
    });
    renderLegend(el('legend'), this.bundle, grid, this.state);
  }

  private select(
    id: string,
    options: string[],
    current: string | number,
    onChange: (value: string) => void,
  ): void {
    const sel = el(id) as HTMLSelectElement;
    sel.textContent = '';
    for (const name of options) {
      const opt = document.createElement('option');
      opt.value = name;
      opt.textContent = name;
      opt.selected = name === String(current);
      sel.appendChild(opt);
    }
    sel.onchange = () => onChange(sel.value);
  }

  private buildControls(): void {
    const names = Object.keys(this.bundle.variables);
    const ks = K_CHOICES.map(String);
    this.select('response', names, this.state.response, (v) =>
      this.apply({ response: v }));
    this.select('given-x', names, this.state.givenX, (v) =>
      this.apply({ givenX: v }));
    this.select('given-y', names, this.state.givenY, (v) =>
      this.apply({ givenY: v }));
    this.select('k-x', ks, this.state.kX, (v) =>
      this.apply({ kX: parseInt(v, 10) }));
    this.select('k-y', ks, this.state.kY, (v) =>
      this.apply({ kY: parseInt(v, 10) }));

    const overlap = el('overlap') as HTMLInputElement;
    overlap.min = '0';
    overlap.max = String(OVERLAP_MAX);
    overlap.step = String(OVERLAP_STEP);
    overlap.value = String(this.state.overlap);
    el('overlap-value').textContent = this.state.overlap.toFixed(2);
    overlap.oninput = () => {
      el('overlap-value').textContent =
        parseFloat(overlap.value).toFixed(2);
      this.apply({ overlap: parseFloat(overlap.value) });
    };
  }
}

const boot = async (): Promise<void> => {
  let text: string | null = null;
  try {
    const resp = await fetch('bundle.json');
    if (resp.ok) {
      text = await resp.text();
    }
  } catch {
    text = null;
  }
  if (text === null) {
    // static hosting without the bundle next to the page: offer a picker
    const picker = el('picker') as HTMLInputElement;
    picker.style.display = 'block';
    picker.onchange = async () => {
      const file = picker.files?.[0];
      if (file) {
        launch(await file.text());
      }
    };
    return;
  }
  launch(text);
};

const launch = (text: string): void => {
  try {
    const bundle = parseBundle(text);
    (el('picker') as HTMLInputElement).style.display = 'none';
    new App(bundle).start();
  } catch (err) {
    if (err instanceof SchemaMismatchError) {
      showBanner(
        `Cannot load data: bundle schema "${err.got}" is not the ` +
          `supported "${err.expected}". Re-export the bundle with a ` +
          `matching toolkit version.`,
      );
      return;
    }
    throw err;
  }
};

boot();
