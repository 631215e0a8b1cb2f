"""Exact workbench for motivic height zeta computations over function fields.

Modules:

* ``grot`` -- arithmetic in the localized Grothendieck-ring fragment
  Z[L, L^-1, (L^a - 1)^-1] with stratum symbols and its realizations;
* ``series`` -- rational Laurent series over that ring: expansion, partial
  fractions, resultants, dagger evaluation, tauberian asymptotics;
* ``cycint``/``local`` -- exact finite-field harmonic analysis on windows
  of F_q((t))^n: Fourier transforms, inversion, oscillatory integrals;
* ``funfield``/``poisson`` -- places, Riemann-Roch lattices, residues and
  the global Poisson summation check on P^1;
* ``igusa`` -- boundary data, Clemens complexes and closed-form local zeta
  evaluations with a jet-counting oracle;
* ``height`` -- the end-to-end toy height zeta function, assembled through
  harmonic analysis and verified against literal section counting;
* ``cli``/``workbench`` -- the command-line front end.
"""

from .grot import (L, MOT_ONE, MOT_ZERO, MotClass, MotError, PoincareSeries,
                   StratumSymbol, SymbolRegistry, count_realize, dim_nu,
                   effectivity_certificate, inv, normalize, parse_mot,
                   poincare, render_mot)
from .series import (Factor, LaurentPolyMot, RationalMotSeries, SeriesError,
                     evaluate_dagger_at_Linv, expand, merge_proportional_factors,
                     partial_fractions, resultant_closed_form, specialize_lambda,
                     sylvester_resultant, tauberian_report)
from .cycint import CycValue
from .local import (AffineCharacterFn, FiniteLaurent, LocalError, LocalWindow,
                    ResiduePairing, SBLocal, exp_sum_linear, fourier,
                    integrate, inversion_check, oscillatory_I_brute,
                    oscillatory_I_closed, shell_vanishing_check)
from .funfield import INF, DifferentialForm, FqPoly, FqRat, Place, form_dt
from .poisson import (Divisor, GlobalSB, RRBasis, global_fourier,
                      poisson_check, riemann_roch_basis, residue_theorem_check,
                      simple_function, sum_over_rational_points)
from .igusa import (BoundaryDatum, ClemensComplex, VerticalComponent, clemens,
                    igusa_with_exponential, jet_count_oracle, leading_constant,
                    local_Z_integral_place, local_Z_trivial)
from .height import (SectionCount, ToyGeometry, assemble_Z_poisson,
                     assemble_Z_trivial_term, brute_force_sections,
                     theorem_main_check, toy_end_to_end, toy_height_series)

__version__ = "0.1.0"
