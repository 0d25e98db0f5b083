/**
 * Analytic objectives for contour figures, evaluated along the steady-state
 * map y = h(u). Only the two closed-form case studies are drawable this way.
 */

export interface NamedObjective {
  /** cost at the inputs (outputs substituted analytically) */
  phi(u1: number, u2: number): number;
  /** input domain box [u1lo, u1hi, u2lo, u2hi] */
  box: [number, number, number, number];
  /** optional output-feasibility indicator drawn as dashed boundaries */
  outputLevels?: { f(u1: number, u2: number): number; levels: number[] };
}

export const OBJECTIVES: Record<string, NamedObjective> = {
  toy: {
    phi: (u1, u2) => {
      const y = u2 ** 3 + u1 - u2 + 0.5;
      return 1.5 * u1 ** 2 + u2 ** 2 - u2 ** 3 + u1 * u2 - 3 * u2 + 1.5 + y;
    },
    box: [-1, 1, -1, 1],
    outputLevels: {
      f: (u1, u2) => u2 ** 3 + u1 - u2 + 0.5,
      levels: [0, 1],
    },
  },
  rosenbrock: {
    phi: (u1, u2) => {
      const y1 = 10 * (u2 - u1 ** 2);
      const y2 = 1 - u1;
      return y1 ** 2 + y2 * (1 - u1);
    },
    box: [-1, 1, -1, 0.75],
  },
};
