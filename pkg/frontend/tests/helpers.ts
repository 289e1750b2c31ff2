import { readFileSync } from 'node:fs';
import { dirname, join } from 'node:path';
import { fileURLToPath } from 'node:url';

import { parseBundle, type Bundle } from '../src/bundle.js';

const here = dirname(fileURLToPath(import.meta.url));

export const fixtureText = (name: string): string =>
  readFileSync(join(here, 'fixtures', name), 'utf-8');

export const loadBundle = (): Bundle => parseBundle(fixtureText('bundle.json'));

export interface SidecarShingle {
  lower: number;
  upper: number;
  codes: number[];
}

export interface SidecarPanel {
  x_index: number;
  y_index: number;
  codes: number[];
  count: number;
  median_response: number | null;
}

export interface Sidecar {
  schema: string;
  response: string;
  given_x: string;
  given_y: string;
  k_x: number;
  k_y: number;
  overlap: number;
  reciprocal: boolean;
  cuts: number[];
  classes: Record<string, number>;
  shingles_x: SidecarShingle[];
  shingles_y: SidecarShingle[];
  panels: SidecarPanel[];
}

export const loadSidecar = (): Sidecar =>
  JSON.parse(fixtureText('fig21.json')) as Sidecar;
