import type { Bundle } from './bundle.js';
import type { ExplorerState } from './state.js';
import {
  divergingPercentileScale,
  equalCountShingles,
  median,
  type Shingle,
} from './stats.js';

export interface PanelModel {
  xIndex: number;
  yIndex: number;
  memberIndices: number[];
  memberCodes: number[];
  count: number;
  median: number | null;
}

export interface PanelGrid {
  panels: PanelModel[];
  shinglesX: Shingle[];
  shinglesY: Shingle[];
  classes: number[];
  colors: string[];
  cuts: number[];
  reciprocal: boolean;
}

// population-per-event responses are classed on the event rate so the hot
// end of the palette tracks more events, not more population per event
export const isReciprocal = (bundle: Bundle, response: string): boolean =>
  bundle.variables[response].kind === 'pop_per_event';

export const recomputePanels = (state: ExplorerState, bundle: Bundle): PanelGrid => {
  const response = bundle.variables[state.response].values;
  const givenX = bundle.variables[state.givenX].values;
  const givenY = bundle.variables[state.givenY].values;
  const reciprocal = isReciprocal(bundle, state.response);

  const scale = divergingPercentileScale(response, reciprocal);
  const shinglesX = equalCountShingles(givenX, state.kX, state.overlap);
  const shinglesY = equalCountShingles(givenY, state.kY, state.overlap);

  const panels: PanelModel[] = [];
  for (let i = 0; i < state.kX; i++) {
    const inX = new Set(shinglesX[i].memberIndices);
    for (let j = 0; j < state.kY; j++) {
      const members = shinglesY[j].memberIndices.filter((m) => inX.has(m));
      members.sort((a, b) => a - b);
      panels.push({
        xIndex: i,
        yIndex: j,
        memberIndices: members,
        memberCodes: members.map((m) => bundle.codes[m]),
        count: members.length,
        median: members.length
          ? median(members.map((m) => response[m]))
          : null,
      });
    }
  }
  return {
    panels,
    shinglesX,
    shinglesY,
    classes: scale.classes,
    colors: scale.classes.map((c) => bundle.palette[c - 1]),
    cuts: scale.cuts,
    reciprocal,
  };
};

export const classColor = (bundle: Bundle, cls: number): string =>
  bundle.palette[cls - 1];
