export const SCHEMA = 'moralstat/1';

export interface BundleFeature {
  code: number;
  name: string;
  region: string;
  rings: number[][][];
}

export interface BundleVariable {
  kind: string;
  more_is_better: boolean;
  values: number[];
}

export interface ExplorerDefaults {
  response: string;
  given_x: string;
  given_y: string;
  k_x: number;
  k_y: number;
  overlap: number;
}

export interface Bundle {
  schema: string;
  extent: [number, number, number, number];
  simplify_tolerance: number;
  codes: number[];
  features: BundleFeature[];
  regions: Record<string, string>;
  variables: Record<string, BundleVariable>;
  defaults: ExplorerDefaults;
  palette: string[];
}

export class SchemaMismatchError extends Error {
  readonly expected = SCHEMA;
  readonly got: string;

  constructor(got: string) {
    super(`bundle schema "${got}" does not match expected "${SCHEMA}"`);
    this.name = 'SchemaMismatchError';
    this.got = got;
  }
}

export const parseBundle = (text: string): Bundle => {
  const doc = JSON.parse(text) as Record<string, unknown>;
  const schema = typeof doc.schema === 'string' ? doc.schema : String(doc.schema);
  if (schema !== SCHEMA) {
    throw new SchemaMismatchError(schema);
  }
  return doc as unknown as Bundle;
};

export const featureIndexByCode = (bundle: Bundle): Map<number, number> => {
  const index = new Map<number, number>();
  bundle.codes.forEach((code, i) => index.set(code, i));
  return index;
};
