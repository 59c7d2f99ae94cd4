"""Named verification suites for polynomial p-groups and their fusion data

   Copyright 2023 The polyfus Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.

Each suite checks one structural property of a group S = S_n(q) or S_Lambda(q), and returns a list
of CheckReport objects.  Suites are registered in the static table SUITES, together with predicates
that decide which groups they apply to.  Groups out of range are reported as skipped.
"""

from __future__ import annotations

import dataclasses
import logging
import math
from collections.abc import Callable, Mapping, Sequence
from typing import Literal

import galois
import numpy as np

from polyfus import fusion
from polyfus.groups import (
    ParabolicElement,
    PolynomialGroup,
    Rows,
    SizeCapError,
    Subgroup,
    get_size_cap,
    parabolic_subgroups,
    standard_subgroups,
)
from polyfus.modules import random_triples
from polyfus.objects import CheckReport, Status
from polyfus.structure import (
    MAX_ORACLE_ORDER,
    SeriesKind,
    action_on_centre,
    action_on_centre_lambda,
    bc_families,
    cents_lemma_count,
    central_series,
    char_subgroup_ulvs,
    commutator_chain,
    commutator_order,
    gamma_centralizer,
    gamma_quotient,
    lambda_quotient,
    module_centralizer,
    permutation_oracle,
    same_space,
    subgroup_similarity,
    weight_filtration,
)

logger = logging.getLogger(__name__)

Tier = Literal["exhaustive", "sampled"]
TIERS: tuple[Tier, ...] = ("exhaustive", "sampled")

# values of n checked for S_n(q) when no target is requested
MAX_DEFAULT_N = 3

COM_FULL_SAMPLES = 200
COM_FULL_MAX_TERM = 10**4
EXPONENT_SAMPLES = 2000
HOMOMORPHISM_PAIRS = 500
PSI_STAR_PAIRS = 2000
DELTA_SAMPLES = 20
R_CAP_SAMPLES: dict[Tier, int] = {"exhaustive": 10**4, "sampled": 10**3}


@dataclasses.dataclass(frozen=True)
class SuiteParams:
    """Parameters of a suite run: the field GF(p^m), and optionally a group target and a system.

    Without a target, suites run on S_n(q) for 1 <= n <= min(p - 1, MAX_DEFAULT_N) and on
    S_Lambda(q), skipping the groups that they do not apply to.
    """

    p: int
    m: int
    target: str | None = None
    system: str | None = None

    def groups(self) -> list[PolynomialGroup]:
        """The groups to run suites on."""
        if self.target is not None:
            return [PolynomialGroup.from_target(self.p, self.m, self.target)]
        max_n = max(1, min(self.p - 1, MAX_DEFAULT_N))
        groups = [PolynomialGroup.sn(self.p, self.m, nn) for nn in range(1, max_n + 1)]
        return groups + [PolynomialGroup.slambda(self.p, self.m)]


Runner = Callable[[PolynomialGroup, SuiteParams, int, Tier], list[CheckReport]]


@dataclasses.dataclass(frozen=True)
class VerificationSuite:
    """A named suite, the range of groups it applies to, and the function that runs it.

    The predicate `valid` returns the reason that a group is out of range, or None.
    """

    id: str
    description: str
    valid: Callable[[PolynomialGroup], str | None]
    run: Runner

    def __call__(
        self,
        group: PolynomialGroup,
        params: SuiteParams,
        seed: int = 0,
        tier: Tier | None = None,
    ) -> list[CheckReport]:
        report_params = {**group.params(), "seed": seed}
        if (reason := self.valid(group)) is not None:
            logger.warning(f"Skipping {self.id} on {group}: {reason}")
            return [CheckReport.skipped(self.id, report_params, Status.SKIPPED_RANGE, reason)]
        if tier is None:
            tier = "exhaustive" if group.order <= get_size_cap() else "sampled"
        logger.info(f"Running {self.id} on {group} ({tier})")
        try:
            return self.run(group, params, seed, tier)
        except SizeCapError as error:
            logger.warning(f"Skipping {self.id} on {group}: {error}")
            return [CheckReport.skipped(self.id, report_params, Status.SKIPPED_SIZE, str(error))]


def _report(
    check: str,
    group: PolynomialGroup,
    seed: int,
    conditions: dict[str, bool],
    counts: Mapping[str, object] | None = None,
    **params: object,
) -> CheckReport:
    report_params = {**group.params(), "seed": seed, **params}
    return CheckReport.from_conditions(check, report_params, conditions, counts)


################################################################################
# parameter ranges


def _sn_range(lower: int) -> Callable[[PolynomialGroup], str | None]:
    def valid(group: PolynomialGroup) -> str | None:
        if group.is_lambda or not lower <= group.n <= group.p - 1:
            return f"requires S_n(q) with {lower} <= n <= p - 1"
        return None

    return valid


_sn_below_p = _sn_range(1)


def _sn_p(group: PolynomialGroup) -> str | None:
    return None if not group.is_lambda and group.n == group.p else "requires S_p(q)"


def _lambda_only(group: PolynomialGroup) -> str | None:
    return None if group.is_lambda else "requires S_Lambda(q)"


def _lambda_large_field(group: PolynomialGroup) -> str | None:
    return None if group.is_lambda and group.m > 1 else "requires S_Lambda(q) with q > p"


def _sn_or_lambda(group: PolynomialGroup) -> str | None:
    return None if group.is_lambda else _sn_below_p(group)


def _large_field(group: PolynomialGroup) -> str | None:
    return "requires q > p" if group.m == 1 else _sn_or_lambda(group)


def _tower_range(group: PolynomialGroup) -> str | None:
    return None if group.is_lambda else _sn_range(2)(group)


def _exclusion_range(group: PolynomialGroup) -> str | None:
    return "requires q > p" if group.m == 1 else _sn_below_p(group)


################################################################################
# structure of S


def run_somnibus(
    group: PolynomialGroup, params: SuiteParams, seed: int, tier: Tier
) -> list[CheckReport]:
    """[C_i, S] = C_(i-1), Z_i(S) = [V, S; n + 1 - i], and C_V(z) = C_V(S) for z outside V."""
    whole = Subgroup.whole(group)
    filtration = weight_filtration(group).terms
    conditions = {
        "[C_0,S]=1": filtration[0].commutator_with(whole).order == 1,
        "[C_i,S]=C_(i-1)": all(
            upper.commutator_with(whole) == lower
            for lower, upper in zip(filtration, filtration[1:])
        ),
    }

    upper = central_series(group, kind=SeriesKind.UPPER_CENTRAL)
    lower = central_series(group, kind=SeriesKind.LOWER_CENTRAL)
    conditions["upper=lower"] = len(upper) == len(lower) and all(
        aa == bb for aa, bb in zip(upper.terms, lower.terms[::-1])
    )

    centre = Subgroup.from_structure(group, [0], group.fixed_space(range(group.q)))
    centralizers = [module_centralizer(group, cc) for cc in range(1, group.q)]
    conditions["C_V(z)=C_V(S)"] = all(cent == centre for cent in centralizers)
    if group.n >= 2:
        module_order = group.q**group.dim
        conditions["V_max_abelian"] = all(
            group.q * cent.order < module_order for cent in centralizers
        )

    borel = parabolic_subgroups(group)["B&P*"]
    subgroups = standard_subgroups(group, ["V", "U[V,S]"])
    conditions["B_normalizes_V"] = borel.normalizes(subgroups["V"])
    conditions["B_normalizes_U[V,S]"] = borel.normalizes(subgroups["U[V,S]"])

    if tier == "exhaustive" and group.order <= min(MAX_ORACLE_ORDER, get_size_cap()):
        oracle = permutation_oracle(group)
        oracle_lower = [order for order in oracle.lower_central_orders if order > 1]
        conditions["oracle_order"] = oracle.order == group.order
        conditions["oracle_centre"] = oracle.center_order == upper.orders[0]
        conditions["oracle_lower"] = oracle_lower == lower.orders
        conditions["oracle_nilpotent"] = oracle.is_nilpotent
    counts: dict[str, object] = {"upper": upper.orders, "centralizers": len(centralizers)}
    return [_report("somnibus", group, seed, conditions, counts, tier=tier)]


def _random_term_rows(
    group: PolynomialGroup, params: Sequence[int], basis: galois.FieldArray, num: int, seed: int
) -> Rows:
    rows = group.random_rows(num, seed=seed)
    rows[:, 1:] = rows[:, 1 : basis.shape[0] + 1] @ basis
    if len(params) < group.q:
        rows[:, 0] = 0
    return rows


def run_com_full(
    group: PolynomialGroup, params: SuiteParams, seed: int, tier: Tier
) -> list[CheckReport]:
    """[z, S] = Z_i(S) for every z in Z_(i+1)(S) outside Z_i(S)."""
    upper = group.upper_central_terms()
    conditions = {}
    checked = 0
    for ii in range(1, len(upper)):
        term = Subgroup.from_structure(group, *upper[ii])
        below = Subgroup.from_structure(group, *upper[ii - 1])
        if tier == "exhaustive" and term.order <= COM_FULL_MAX_TERM:
            rows = term.elements
        else:
            rows = _random_term_rows(group, *upper[ii], COM_FULL_SAMPLES, seed + ii)
        rows = rows[~below.contains(rows)]
        checked += len(rows)
        conditions[f"Z_{ii + 1}"] = all(
            commutator_order(group, row) == below.order for row in rows
        )
    return [_report("com-full", group, seed, conditions, {"elements": checked}, tier=tier)]


def run_cvs_p(
    group: PolynomialGroup, params: SuiteParams, seed: int, tier: Tier
) -> list[CheckReport]:
    """Structure of S_p(q): its centre, Z_2(S), centralizers in V, and the chains [V, z; i]."""
    q, p = group.q, group.p
    centre = group.fixed_space(range(q))
    if group.m == 1:
        conditions = {"|C_V(S)|=p^2": q ** centre.shape[0] == p**2}
        return [_report("cvs-p", group, seed, conditions)]

    identity = group.field.Identity(group.dim)
    upper = group.upper_central_terms()
    centralizers = [module_centralizer(group, cc) for cc in range(1, q)]
    derived = group.lower_central_terms()[0]
    chain = commutator_chain(group).orders
    chain_z = commutator_chain(group, element=group.u_rows([1])[0]).orders
    conditions = {
        "C_V(S)=<x^p>": same_space(centre, identity[:1]),
        "Z_2(S)=<x^p,x^(p-1)y,y^p>": same_space(upper[1][1], identity[[0, 1, p]]),
        "|C_V(z)|=q^2": all(cent.order == q**2 for cent in centralizers),
        "|V/[V,S]|=q^2": group.dim - derived.shape[0] == 2,
        "[V,z;i]=[V,S;i]": chain == chain_z,
        "|[V,S;i]/[V,S;i+1]|=q": all(aa == q * bb for aa, bb in zip(chain, chain[1:])),
    }
    return [_report("cvs-p", group, seed, conditions, {"chain": chain})]


def run_cups_lambda(
    group: PolynomialGroup, params: SuiteParams, seed: int, tier: Tier
) -> list[CheckReport]:
    """Orders of Z(S), Z_2(S), V/[V, S], and C_V(z) in S_Lambda(q), and the exponent of S."""
    q, p = group.q, group.p
    orders = central_series(group).orders
    derived = group.lower_central_terms()[0]
    centralizers = [module_centralizer(group, cc) for cc in range(1, q)]
    if tier == "exhaustive":
        rows = Subgroup.whole(group).elements
    else:
        rows = group.random_rows(EXPONENT_SAMPLES, seed=seed)
    conditions = {
        "|Z(S)|=q^2": orders[0] == q**2,
        "|Z_2(S)|=q^3": orders[1] == q**3,
        "class=p": len(orders) == p and orders[-1] == group.order,
        "|V/[V,S]|=q": group.dim - derived.shape[0] == 1,
        "|C_V(z)|=q^2": all(cent.order == q**2 for cent in centralizers),
        "exponent=p^2": int(np.max(group.row_orders(rows))) == p**2,
    }
    return [_report("cups-lambda", group, seed, conditions, {"upper": orders}, tier=tier)]


def run_charsub(
    group: PolynomialGroup, params: SuiteParams, seed: int, tier: Tier
) -> list[CheckReport]:
    """V and U[V, S] are the only normal subgroups of index q with exponent p containing [V, S]."""
    subgroup, exponents = char_subgroup_ulvs(group)
    exponent_p = sorted(name for name, exponent in exponents.items() if exponent == group.p)
    conditions = {
        "unique": exponent_p == ["U[V,S]", "V"],
        "index_q": subgroup.order * group.q == group.order,
        "H_k:exponent_p^2": all(
            exponent == group.p**2 for name, exponent in exponents.items() if name[:2] == "H_"
        ),
    }
    counts = {"candidates": len(exponents), "exponents": dict(sorted(exponents.items()))}
    return [_report("charsub", group, seed, conditions, counts)]


################################################################################
# maps between polynomial p-groups


def run_gamma_iso(
    group: PolynomialGroup, params: SuiteParams, seed: int, tier: Tier
) -> list[CheckReport]:
    """gamma: S_n(q) -> S_(n-1)(q) is onto with kernel Z(S), and its iterates have kernels Z_i."""
    gamma = gamma_quotient(group)
    upper = group.upper_central_terms()
    conditions = {
        "surjective": gamma.is_surjective(),
        "kernel=Z(S)": gamma.kernel() == Subgroup.from_structure(group, *upper[0]),
        "homomorphism": gamma.check_homomorphism(HOMOMORPHISM_PAIRS, seed=seed),
    }
    if tier == "exhaustive":
        images = gamma(Subgroup.whole(group).elements)
        conditions["kernel_enumerated"] = int(np.sum(gamma.target.is_identity(images))) == group.q
    composite = gamma
    for ii in range(2, group.n):
        composite = composite.compose(gamma_quotient(composite.target))
        kernel = Subgroup.from_structure(group, *upper[ii - 1])
        conditions[f"kernel=Z_{ii}(S)"] = composite.kernel() == kernel
    return [_report("gamma-iso", group, seed, conditions, tier=tier)]


def run_lambda_iso(
    group: PolynomialGroup, params: SuiteParams, seed: int, tier: Tier
) -> list[CheckReport]:
    """The quotient S_Lambda(q) -> S_(p-1)(q) is onto with kernel <bar(y^p)>."""
    quotient = lambda_quotient(group)
    kernel = Subgroup.from_structure(group, [0], group.field.Identity(group.dim)[-1:])
    conditions = {
        "surjective": quotient.is_surjective(),
        "kernel=<y^p>": quotient.kernel() == kernel,
        "homomorphism": quotient.check_homomorphism(HOMOMORPHISM_PAIRS, seed=seed),
    }
    return [_report("lambda-iso", group, seed, conditions)]


def run_similarity(
    group: PolynomialGroup, params: SuiteParams, seed: int, tier: Tier
) -> list[CheckReport]:
    """[V, S; i]U is isomorphic to S_(n-i)(q), and UZ_2(S) is isomorphic to S_1(q)."""
    conditions = {}
    for index in range(group.n):
        similarity = subgroup_similarity(group, index)
        conditions[f"i={index}"] = (
            similarity.is_injective()
            and similarity.is_surjective()
            and similarity.check_homomorphism(HOMOMORPHISM_PAIRS, seed=seed)
        )
    if group.n >= 2:
        domain = subgroup_similarity(group, group.n - 1).domain_subgroup()
        conditions["UZ_2(S)=S_1(q)"] = domain == standard_subgroups(group, ["Q"])["Q"]
    return [_report("similarity", group, seed, conditions)]


################################################################################
# centralizers and actions


def run_centslem(
    group: PolynomialGroup, params: SuiteParams, seed: int, tier: Tier
) -> list[CheckReport]:
    """|C_X(C_V(T))| = q (n, q - 1) for X = SL_2(q), and C_(D*)(V) has q - 1 elements."""
    spec, q, n = group.field_spec, group.q, group.n
    count = cents_lemma_count(spec, n)
    structural = gamma_centralizer(spec, n)
    conditions = {
        "|C_X(C_V(T))|=q(n,q-1)": count == q * math.gcd(n, q - 1),
        "|C_D*(V)|=q-1": len(structural) == q - 1,
    }
    if tier == "exhaustive" and (q - 1) * q**4 <= get_size_cap():
        bruteforce = gamma_centralizer(spec, n, bruteforce=True)
        conditions["C_D*(V)=bruteforce"] = set(structural) == set(bruteforce)
    return [_report("centslem", group, seed, conditions, {"centralizer": count}, tier=tier)]


def run_action_centre(
    group: PolynomialGroup, params: SuiteParams, seed: int, tier: Tier
) -> list[CheckReport]:
    """C_L(V/[V, S]) acts on C_V(S) by n-th power scalars, irreducibly over GF(p)."""
    action = action_on_centre(group)
    conditions = {
        "order": action.order == action.expected_order,
        "irreducible": action.irreducible,
        "trivial_iff_n=q-1": action.trivial == (group.n == group.q - 1),
    }
    return [_report("action-centre", group, seed, conditions, {"scalars": action.order})]


def run_action_centre_lambda(
    group: PolynomialGroup, params: SuiteParams, seed: int, tier: Tier
) -> list[CheckReport]:
    """The cyclic groups K_1 and K_2 in the automizer of S_Lambda(q) fix q points of V each."""
    action = action_on_centre_lambda(group)
    conditions = {
        "|C_V(K_i)|=q": action.fixed_orders == (group.q, group.q),
        "centralizes": all(action.centralizes_targets),
    }
    return [_report("action-centre-lambda", group, seed, conditions)]


################################################################################
# the families B(S) and C(S)


def _family_names(group: PolynomialGroup) -> list[Literal["R", "Q"]]:
    return ["R", "Q"] if group.is_lambda or group.n > 1 else ["R"]


def run_intersec(
    group: PolynomialGroup, params: SuiteParams, seed: int, tier: Tier
) -> list[CheckReport]:
    """Distinct S-conjugates of A = R or Q intersect in Z(S) or Z_2(S), respectively."""
    reports = []
    for name in _family_names(group):
        family = bc_families(group, name)
        conditions = {
            "member": family.member(),
            "normalizer": family.normalizer == family.expected_normalizer,
            "conjugates": len(family.conjugates) == family.expected_conjugates,
            "intersections": family.intersections_ok(),
        }
        counts = {"conjugates": len(family.conjugates)}
        reports.append(_report("intersec", group, seed, conditions, counts, subgroup=name))
    return reports


def run_s_conj(
    group: PolynomialGroup, params: SuiteParams, seed: int, tier: Tier
) -> list[CheckReport]:
    """Every element of A[V, S] outside [V, S] is S-conjugate into A, for A = R or Q."""
    reports = []
    for name in _family_names(group):
        family = bc_families(group, name)
        conditions = {"conjugate_into_A": family.s_conjugacy_ok(), "products": family.products_ok()}
        reports.append(_report("s-conj", group, seed, conditions, subgroup=name))
    return reports


################################################################################
# fusion data


def _random_normalizing_elements(
    group: PolynomialGroup, num: int, seed: int
) -> list[ParabolicElement]:
    triples = random_triples(group.field_spec, num, lower_triangular=True, seed=seed)
    vectors = group.random_rows(num, seed=seed)[:, 1:]
    return [ParabolicElement(group, triple, vec) for triple, vec in zip(triples, vectors)]


def run_delta_kernel(
    group: PolynomialGroup, params: SuiteParams, seed: int, tier: Tier
) -> list[CheckReport]:
    """Torus elements of P* with trivial delta-image centralize S."""
    report = fusion.delta_kernel_check(group)
    conditions = {
        "trivial=q-1": report.trivial == group.q - 1,
        "centralizing=q-1": report.centralizing == group.q - 1,
        "kernel=C_D*(V)": report.nontrivial_kernel == 0,
        "distinct_images": report.distinct_images == report.expected_images,
    }
    elements = _random_normalizing_elements(group, 2 * DELTA_SAMPLES, seed)
    conditions["modes_agree"] = all(
        fusion.delta(element) == fusion.delta(element, mode="bruteforce")
        for element in elements[:DELTA_SAMPLES]
    )
    conditions["homomorphism"] = all(
        fusion.delta(left * right) == fusion.delta(left) * fusion.delta(right)
        for left, right in zip(elements[::2], elements[1::2])
    )
    counts: dict[str, object] = dataclasses.asdict(report)
    return [_report("delta-kernel", group, seed, conditions, counts)]


def run_psi_star(
    group: PolynomialGroup, params: SuiteParams, seed: int, tier: Tier
) -> list[CheckReport]:
    """psi*: N_(P*)(R) -> P*_R is a monomorphism that maps R onto O_p(P_R)."""
    report = fusion.psi_star_check(group, PSI_STAR_PAIRS, seed=seed)
    conditions = {
        "homomorphism": report.homomorphism,
        "image_in_P*_R": report.in_p_r_star,
        "injective": report.injective,
        "R->O_p(P_R)": report.radical_pattern and report.radical_images == group.q**3,
        "torus_example": report.diagonal_example,
    }
    counts: dict[str, object] = dataclasses.asdict(report)
    return [_report("psi-star", group, seed, conditions, counts)]


def run_r_cap(
    group: PolynomialGroup, params: SuiteParams, seed: int, tier: Tier
) -> list[CheckReport]:
    """R & R^s <= V for s in P* outside N_(P*)(R)."""
    report = fusion.r_intersection_check(group, R_CAP_SAMPLES[tier], seed=seed)
    conditions = {
        "S-conjugates": report.conjugates == report.conjugates_ok,
        "torus_normalizes_R": report.normalizing_ok,
        "outside_N(S)": report.outside == report.outside_ok,
    }
    counts: dict[str, object] = dataclasses.asdict(report)
    return [_report("r-cap", group, seed, conditions, counts, tier=tier)]


def run_size_ess(
    group: PolynomialGroup, params: SuiteParams, seed: int, tier: Tier
) -> list[CheckReport]:
    """Normalizers, intersections with V, and centres of the candidate essential subgroups."""
    reports = []
    for name in ["V", *_family_names(group)]:
        local = fusion.essential_local_data(group, name)
        conditions = {**local.conditions(), "|N_S(E):E|=q": local.index == group.q}
        counts = {"normalizer": local.normalizer.order, "meet_v": local.meet_v.order}
        reports.append(_report("size-ess", group, seed, conditions, counts, subgroup=name))
    return reports


def _system_names(group: PolynomialGroup, params: SuiteParams) -> list[str]:
    if params.system is not None:
        return [params.system]
    if group.is_lambda:
        return ["F*_Λ(q)", "F*_Λ(q)_P", "F_Λ(q)"]
    return ["F*(n,q,R)", "F*(n,q,R)_P"] + (["F*(n,q,Q)"] if group.n > 1 else [])


def run_out0(
    group: PolynomialGroup, params: SuiteParams, seed: int, tier: Tier
) -> list[CheckReport]:
    """Orders of Out^0_F(S) and Out_F(S), and the orbits of the lift subgroups K_E."""
    reports = []
    for name in _system_names(group, params):
        desc = fusion.describe_system(name, group.p, group.m, None if group.is_lambda else group.n)
        if desc.group != group:
            raise ValueError(f"The system {name} does not live on {group}")
        out0 = fusion.out0_order(desc)
        out = fusion.out_order(desc)
        orbits = fusion.te_regularity(desc)
        classes = fusion.frc_subgroups(desc)
        conditions = {
            "Out^0": out0.order == out0.expected,
            "Out": out.order == out.expected,
            "regular_on_S/V": all(orbit.regular_on_quotient for orbit in orbits),
            "action_on_Z(S)": all(orbit.centre_ok for orbit in orbits),
            "frc_classes": len(classes) == len(desc.essentials) + 1,
        }
        if "V" in desc.essentials and not group.is_lambda:
            expected = (group.q - 1) // math.gcd(group.n, 2)
            conditions["|K_V|"] = out0.lift_orders["V"] == expected
        counts = {"out0": out0.order, "expected": out0.expected, "out": out.order}
        counts["index"] = out.order // out0.order
        reports.append(_report("out0", group, seed, conditions, counts, system=desc.title))
    return reports


def run_tower(
    group: PolynomialGroup, params: SuiteParams, seed: int, tier: Tier
) -> list[CheckReport]:
    """Normalizer towers of F*(n, q, R)_P, and quotients of pruned systems by their p-cores."""
    reports = []
    if group.is_lambda:
        desc = fusion.describe_system("F*_Λ(q)_P", group.p, group.m)
    else:
        tower = fusion.describe_system("F*(n,q,R)_P", group.p, group.m, group.n)
        conditions = {}
        for index in range(2, group.n + 1):
            level = fusion.normalizer_tower(tower, index)
            certificate = level.certificate(HOMOMORPHISM_PAIRS, seed=seed)
            certificate["order"] &= level.subgroup.order == group.q ** (index + 2)
            conditions.update({f"N^{index}:{key}": val for key, val in certificate.items()})
        reports.append(_report("tower", group, seed, conditions, system=tower.title))
        desc = fusion.describe_system("F*(n,q,Q)_P", group.p, group.m, group.n)
    quotient = fusion.pruned_quotient(desc)
    conditions = {"kernel=O_p(F)": quotient.kernel_ok, "image=R": quotient.image_ok}
    counts: dict[str, object] = {"target": quotient.target.title}
    reports.append(_report("tower", group, seed, conditions, counts, system=desc.title))
    return reports


def run_essential_exclusion(
    group: PolynomialGroup, params: SuiteParams, seed: int, tier: Tier
) -> list[CheckReport]:
    """No k has p^m - 1 dividing n p^k + p^k + 1, and torus witnesses realize the exclusion."""
    report = fusion.essential_exclusion(group)
    solutions = {nn: fusion.exclusion_solutions(group.p, group.m, nn) for nn in range(1, group.p)}
    conditions = {
        "no_solutions": not any(solutions.values()),
        "abelian_witnesses": report.abelian_witnesses,
        "nonabelian_witnesses": report.nonabelian_witnesses,
        "module_criterion": report.criterion_consistent,
    }
    counts: dict[str, object] = {"values_of_n": len(solutions)}
    return [_report("essential-exclusion", group, seed, conditions, counts)]


################################################################################
# registry and entry points


SUITES: dict[str, VerificationSuite] = {
    suite.id: suite
    for suite in (
        VerificationSuite("somnibus", "central series of S", _sn_below_p, run_somnibus),
        VerificationSuite("com-full", "[z, S] = Z_i(S)", _sn_below_p, run_com_full),
        VerificationSuite("cvs-p", "structure of S_p(q)", _sn_p, run_cvs_p),
        VerificationSuite("cups-lambda", "S_Lambda(q)", _lambda_large_field, run_cups_lambda),
        VerificationSuite("charsub", "U[V, S] is characteristic", _lambda_large_field, run_charsub),
        VerificationSuite("gamma-iso", "the quotient map gamma", _sn_range(2), run_gamma_iso),
        VerificationSuite("lambda-iso", "quotient of S_Lambda(q)", _lambda_only, run_lambda_iso),
        VerificationSuite("similarity", "subgroups similar to S_i(q)", _sn_below_p, run_similarity),
        VerificationSuite("centslem", "centralizers in SL_2(q)", _sn_below_p, run_centslem),
        VerificationSuite("action-centre", "action on C_V(S)", _sn_below_p, run_action_centre),
        VerificationSuite(
            "action-centre-lambda",
            "fixed points in Lambda(q)",
            _lambda_large_field,
            run_action_centre_lambda,
        ),
        VerificationSuite("intersec", "intersections of conjugates", _sn_or_lambda, run_intersec),
        VerificationSuite("s-conj", "S-conjugacy into R and Q", _sn_or_lambda, run_s_conj),
        VerificationSuite("delta-kernel", "the kernel of delta", _sn_or_lambda, run_delta_kernel),
        VerificationSuite("psi-star", "the monomorphism psi*", _lambda_only, run_psi_star),
        VerificationSuite("r-cap", "R & R^s <= V", _lambda_only, run_r_cap),
        VerificationSuite("size-ess", "essential subgroup data", _sn_or_lambda, run_size_ess),
        VerificationSuite("out0", "orders of Out^0_F(S)", _large_field, run_out0),
        VerificationSuite("tower", "normalizer towers, quotients", _tower_range, run_tower),
        VerificationSuite(
            "essential-exclusion",
            "excluded essential subgroups",
            _exclusion_range,
            run_essential_exclusion,
        ),
    )
}


def run_suite(
    suite_id: str, params: SuiteParams, *, seed: int = 0, tier: Tier | None = None
) -> list[CheckReport]:
    """Run one suite on every group selected by some parameters."""
    if suite_id not in SUITES:
        raise ValueError(f"Unrecognized suite: {suite_id} (expected one of {list(SUITES)})")
    if tier is not None and tier not in TIERS:
        raise ValueError(f"Unrecognized tier: {tier} (expected one of {TIERS})")
    suite = SUITES[suite_id]
    reports = []
    for group in params.groups():
        reports.extend(suite(group, params, seed, tier))
    return reports
