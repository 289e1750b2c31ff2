import type { Bundle } from './bundle.js';

export interface ExplorerState {
  response: string;
  givenX: string;
  givenY: string;
  kX: number;
  kY: number;
  overlap: number;
  hover: number | null;
}

export const OVERLAP_STEP = 0.01;
export const OVERLAP_MAX = 0.5;
export const K_CHOICES = [1, 2, 3];

export const validateState = (state: ExplorerState, bundle: Bundle): void => {
  for (const name of [state.response, state.givenX, state.givenY]) {
    if (!(name in bundle.variables)) {
      throw new RangeError(`unknown variable "${name}"`);
    }
  }
  if (state.response === state.givenX || state.response === state.givenY) {
    throw new RangeError('response must differ from both conditioning variables');
  }
  if (state.givenX === state.givenY) {
    throw new RangeError('the two conditioning variables must differ');
  }
  for (const k of [state.kX, state.kY]) {
    if (!K_CHOICES.includes(k)) {
      throw new RangeError(`shingle count must be 1, 2, or 3, got ${k}`);
    }
  }
  if (!(state.overlap >= 0 && state.overlap <= OVERLAP_MAX)) {
    throw new RangeError(`overlap must lie in [0, ${OVERLAP_MAX}], got ${state.overlap}`);
  }
  if (state.hover !== null && !bundle.codes.includes(state.hover)) {
    throw new RangeError(`hover code ${state.hover} not in bundle`);
  }
};

export const defaultState = (bundle: Bundle): ExplorerState => {
  const d = bundle.defaults;
  const state: ExplorerState = {
    response: d.response,
    givenX: d.given_x,
    givenY: d.given_y,
    kX: d.k_x,
    kY: d.k_y,
    overlap: d.overlap,
    hover: null,
  };
  validateState(state, bundle);
  return state;
};

// atomic transition: returns a fresh validated state, never mutates
export const withUpdate = (
  state: ExplorerState,
  patch: Partial<ExplorerState>,
  bundle: Bundle,
): ExplorerState => {
  const next = { ...state, ...patch };
  validateState(next, bundle);
  return next;
};
