import type { Bundle } from './bundle.js';
import { featureIndexByCode } from './bundle.js';
import { formatSig4 } from './format.js';
import type { PanelGrid } from './panels.js';
import type { ExplorerState } from './state.js';

export interface TooltipValue {
  variable: string;
  value: string;
}

export interface TooltipModel {
  code: number;
  name: string;
  region: string;
  response: TooltipValue;
  givenX: TooltipValue;
  givenY: TooltipValue;
  colorClass: number;
}

export const hoverInspect = (
  code: number | null,
  state: ExplorerState,
  bundle: Bundle,
  grid: PanelGrid,
): TooltipModel | null => {
  if (code === null) {
    return null;
  }
  const index = featureIndexByCode(bundle).get(code);
  if (index === undefined) {
    return null;
  }
  const feature = bundle.features[index];
  const pick = (variable: string): TooltipValue => ({
    variable,
    value: formatSig4(bundle.variables[variable].values[index]),
  });
  return {
    code,
    name: feature.name,
    region: bundle.regions[feature.region],
    response: pick(state.response),
    givenX: pick(state.givenX),
    givenY: pick(state.givenY),
    colorClass: grid.classes[index],
  };
};
