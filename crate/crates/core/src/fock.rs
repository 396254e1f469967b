//! Ladder operators on the occupation basis and the operator-identity
//! constructions of the step factors.
//!
//! Operators carry the string sign `(-1)^(number of occupied bits below)`,
//! ordered by the global bit index `b(x, gamma) = 4x + gamma`, so all
//! matrices are reproducible. The free factor is built by exact polynomial
//! expansion of a normal-ordered one-body exponential (nilpotency makes it
//! finite); the interaction factor by matrix exponential of its quartic
//! generator, site by site.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::CoreError;
use crate::hamiltonian::Hamiltonian;
use crate::lattice::{LatticeSpec, Mover, Species, SPECIES_PER_SITE};
use crate::numerics::hermitian_function;
use crate::sector::Sector;
use crate::sparse::SparseMatrix;
use crate::step_operator::{Factor, StepForm, StepOperator};
use crate::wavefunction::StateVector;

fn c64(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Annihilation operator for a single mode on `n_modes` bits:
/// removes the bit with sign `(-1)^(occupied bits below)`.
pub fn annihilator_mode(n_modes: usize, mode: usize) -> SparseMatrix {
    assert!(mode < n_modes && n_modes < usize::BITS as usize);
    let dim = 1usize << n_modes;
    let below = (1usize << mode) - 1;
    let mut triplets = Vec::with_capacity(dim / 2);
    for source in 0..dim {
        if source >> mode & 1 == 1 {
            let sign = if ((source & below).count_ones()) % 2 == 0 { 1.0 } else { -1.0 };
            triplets.push((source & !(1 << mode), source, c64(sign)));
        }
    }
    SparseMatrix::from_triplets(dim, dim, triplets)
}

/// Creation operator: adds the bit with the same string sign.
pub fn creator_mode(n_modes: usize, mode: usize) -> SparseMatrix {
    annihilator_mode(n_modes, mode).dagger()
}

/// Annihilator for species `gamma` at site `x` on the full configuration space.
pub fn annihilator(spec: &LatticeSpec, x: usize, species: Species) -> SparseMatrix {
    annihilator_mode(spec.num_bits(), spec.bit(x, species))
}

pub fn creator(spec: &LatticeSpec, x: usize, species: Species) -> SparseMatrix {
    creator_mode(spec.num_bits(), spec.bit(x, species))
}

/// Number operator `a^dag a` for one mode.
pub fn number_mode(n_modes: usize, mode: usize) -> SparseMatrix {
    creator_mode(n_modes, mode).matmul(&annihilator_mode(n_modes, mode))
}

fn enumerable_dim(spec: &LatticeSpec, cap: usize) -> Result<usize, CoreError> {
    match spec.dimension() {
        Some(d) if d <= cap => Ok(d),
        Some(d) => Err(CoreError::BudgetExceeded { dim: d, cap }),
        None => Err(CoreError::BudgetExceeded { dim: usize::MAX, cap }),
    }
}

// ---------------------------------------------------------------------------
// Interaction factor
// ---------------------------------------------------------------------------

/// Color bilinear `a^dag_1 a_2 - a^dag_2 a_1` for one mover on one 4-bit site.
fn site_color_bilinear(mover: Mover) -> SparseMatrix {
    let (m1, m2) = match mover {
        Mover::Right => (0usize, 1usize),
        Mover::Left => (2usize, 3usize),
    };
    let up = creator_mode(4, m1).matmul(&annihilator_mode(4, m2));
    let down = creator_mode(4, m2).matmul(&annihilator_mode(4, m1));
    up.sub(&down)
}

/// The 16x16 quartic generator `[a^dag_R1 a_R2 - a^dag_R2 a_R1]
/// [a^dag_L1 a_L2 - a^dag_L2 a_L1]` of the one-site interaction (Hermitian).
pub fn site_scatter_generator() -> SparseMatrix {
    site_color_bilinear(Mover::Right).matmul(&site_color_bilinear(Mover::Left))
}

/// One-site interaction block `exp((i pi / 2) * generator)` by matrix
/// exponential; the generator is Hermitian so the result is unitary.
pub fn site_scatter_block() -> DMatrix<Complex64> {
    let gen = site_scatter_generator().to_dense();
    hermitian_function(&gen, |v| Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_2 * v))
}

/// Interaction step operator assembled as a direct product of identical site
/// blocks (site 0 runs fastest). Dense storage caps the lattice at two sites.
pub fn build_s_int_fock(spec: &LatticeSpec) -> Result<StepOperator, CoreError> {
    let dim = enumerable_dim(spec, 1 << 10)?;
    let block = site_scatter_block();
    let mut full = DMatrix::identity(1, 1);
    for _ in 0..spec.m_x {
        // prepend so earlier sites stay in the low bits
        full = block.kronecker(&full);
    }
    debug_assert_eq!(full.nrows(), dim);
    Ok(StepOperator { factor: Factor::Int, form: StepForm::Dense(full) })
}

// ---------------------------------------------------------------------------
// Free factor by normal-ordered exponential
// ---------------------------------------------------------------------------

/// One-body term `coeff * a^dag_create a_annihilate`.
#[derive(Debug, Clone, Copy)]
pub struct OneBody {
    pub create: usize,
    pub annihilate: usize,
    pub coeff: i64,
}

/// The transport exponent for one species:
/// `sum_x a^dag(x +- 1) [a(x) - a(x +- 1)]` over the given mode layout.
fn transport_terms(sites: usize, mode_of: impl Fn(usize) -> usize, mover: Mover) -> Vec<OneBody> {
    let mut terms = Vec::with_capacity(2 * sites);
    for x in 0..sites {
        let shifted = match mover {
            Mover::Right => (x + 1) % sites,
            Mover::Left => (x + sites - 1) % sites,
        };
        terms.push(OneBody { create: mode_of(shifted), annihilate: mode_of(x), coeff: 1 });
        terms.push(OneBody { create: mode_of(shifted), annihilate: mode_of(shifted), coeff: -1 });
    }
    terms
}

fn factorial(k: usize) -> i64 {
    (1..=k as i64).product::<i64>().max(1)
}

/// Wick-style reordering sign: sort the interleaved ladder monomial into
/// creators-ascending then annihilators-ascending, one minus sign per
/// transposition, no contractions. `None` when a mode repeats within either
/// group (the term vanishes, as does every extension of it).
fn normal_order_sign(sequence: &[OneBody]) -> Option<(i64, Vec<usize>, Vec<usize>)> {
    let mut ops: Vec<(bool, usize)> = Vec::with_capacity(2 * sequence.len());
    for t in sequence {
        ops.push((true, t.create));
        ops.push((false, t.annihilate));
    }
    let mut creators: Vec<usize> = Vec::new();
    let mut annihilators: Vec<usize> = Vec::new();
    for &(is_c, m) in &ops {
        let list = if is_c { &mut creators } else { &mut annihilators };
        if list.contains(&m) {
            return None;
        }
        list.push(m);
    }
    let mut sorted_c = creators.clone();
    sorted_c.sort_unstable();
    let mut sorted_a = annihilators.clone();
    sorted_a.sort_unstable();
    let ranks: Vec<usize> = ops
        .iter()
        .map(|&(is_c, m)| {
            if is_c {
                sorted_c.iter().position(|&x| x == m).unwrap()
            } else {
                sorted_c.len() + sorted_a.iter().position(|&x| x == m).unwrap()
            }
        })
        .collect();
    let mut inversions = 0usize;
    for i in 0..ranks.len() {
        for j in i + 1..ranks.len() {
            if ranks[i] > ranks[j] {
                inversions += 1;
            }
        }
    }
    let sign = if inversions % 2 == 0 { 1 } else { -1 };
    Some((sign, sorted_c, sorted_a))
}

/// Matrix of the normal-ordered monomial
/// `a^dag_{c1} ... a^dag_{cm} a_{a1} ... a_{am}` (modes ascending per group).
fn monomial_matrix(n_modes: usize, creators: &[usize], annihilators: &[usize]) -> SparseMatrix {
    let mut m = SparseMatrix::identity(1 << n_modes);
    for &a in annihilators.iter().rev() {
        m = annihilator_mode(n_modes, a).matmul(&m);
    }
    for &c in creators.iter().rev() {
        m = creator_mode(n_modes, c).matmul(&m);
    }
    m
}

/// Exact expansion of `N[exp(sum of one-body terms)]`: every ordered sequence
/// of terms is normal ordered and summed with `1/k!`; nilpotency truncates
/// the series at the mode count. Integer arithmetic throughout, one exact
/// division at the end.
pub fn normal_ordered_exponential(n_modes: usize, terms: &[OneBody]) -> SparseMatrix {
    let dim = 1usize << n_modes;
    let max_order = n_modes.min(terms.len());
    let big = factorial(max_order);
    let mut accum: Vec<(usize, usize, i64)> = Vec::new();
    let mut sequence: Vec<OneBody> = Vec::new();
    expand_sequences(terms, &mut sequence, n_modes, max_order, big, &mut accum);
    for i in 0..dim {
        accum.push((i, i, big));
    }
    let mut merged = std::collections::BTreeMap::<(usize, usize), i64>::new();
    for (r, c, v) in accum {
        *merged.entry((r, c)).or_insert(0) += v;
    }
    let triplets = merged
        .into_iter()
        .filter(|&(_, v)| v != 0)
        // integer-valued results are exact: (m * big) / big == m in IEEE
        .map(|((r, c), v)| (r, c, c64(v as f64 / big as f64)))
        .collect();
    SparseMatrix::from_triplets(dim, dim, triplets)
}

fn expand_sequences(
    terms: &[OneBody],
    sequence: &mut Vec<OneBody>,
    n_modes: usize,
    max_order: usize,
    big: i64,
    accum: &mut Vec<(usize, usize, i64)>,
) {
    let k = sequence.len();
    if k > 0 {
        match normal_order_sign(sequence) {
            Some((sign, creators, annihilators)) => {
                let coeff_product: i64 = sequence.iter().map(|t| t.coeff).product();
                let weight = sign * coeff_product * (big / factorial(k));
                let m = monomial_matrix(n_modes, &creators, &annihilators);
                for (r, c, v) in m.triplets() {
                    accum.push((r, c, weight * v.re.round() as i64));
                }
            }
            // a repeated creator or annihilator stays repeated in every extension
            None => return,
        }
    }
    if k == max_order {
        return;
    }
    for &t in terms {
        sequence.push(t);
        expand_sequences(terms, sequence, n_modes, max_order, big, accum);
        sequence.pop();
    }
}

/// Free step factor for one species on its own `2^sites` Fock space.
pub fn build_s_free_fock_species(sites: usize, mover: Mover) -> Result<SparseMatrix, CoreError> {
    if sites > 4 {
        return Err(CoreError::BudgetExceeded { dim: 1 << sites, cap: 16 });
    }
    let terms = transport_terms(sites, |x| x, mover);
    Ok(normal_ordered_exponential(sites, &terms))
}

/// Full free step factor: product of the four per-species normal-ordered
/// exponentials on the global mode layout (sparse; lattice capped at 3 sites).
pub fn build_s_free_fock(spec: &LatticeSpec) -> Result<SparseMatrix, CoreError> {
    let dim = enumerable_dim(spec, 1 << 12)?;
    let n_modes = spec.num_bits();
    let mut product = SparseMatrix::identity(dim);
    for species in Species::ALL {
        let terms = transport_terms(
            spec.m_x,
            |x| SPECIES_PER_SITE * x + species.index(),
            species.mover,
        );
        let factor = normal_ordered_exponential(n_modes, &terms);
        product = factor.matmul(&product);
    }
    Ok(product)
}

// ---------------------------------------------------------------------------
// Lattice Hamiltonians
// ---------------------------------------------------------------------------

/// Sparse kinetic and interaction generators on the full space:
/// `H_free = sum_x sum_a (i/(2 eps)) [a^dag_La (a_La(x+1) - a_La(x-1))
///  - a^dag_Ra (a_Ra(x+1) - a_Ra(x-1))]` (the symmetric lattice derivative,
/// one-particle eigenvalues `+-sin(2 pi k / M_x)/eps`), and
/// `H_int = -(pi/(2 eps)) sum_x (site scatter generator)`.
pub fn build_h_lattice_sparse(
    spec: &LatticeSpec,
) -> Result<(SparseMatrix, SparseMatrix), CoreError> {
    let dim = enumerable_dim(spec, 1 << 12)?;
    let eps = spec.epsilon;
    let mut free = SparseMatrix::zeros(dim, dim);
    for species in Species::ALL {
        let sign = match species.mover {
            Mover::Left => 1.0,
            Mover::Right => -1.0,
        };
        for x in 0..spec.m_x {
            let up = spec.wrap(x as isize + 1);
            let down = spec.wrap(x as isize - 1);
            let adag = creator(spec, x, species);
            let hop = annihilator(spec, up, species)
                .sub(&annihilator(spec, down, species))
                .scale(c64(0.5));
            free = free.add(&adag.matmul(&hop).scale(Complex64::new(0.0, sign / eps)));
        }
    }
    let mut int = SparseMatrix::zeros(dim, dim);
    for x in 0..spec.m_x {
        let b_r = full_color_bilinear(spec, x, Mover::Right);
        let b_l = full_color_bilinear(spec, x, Mover::Left);
        int = int.add(&b_r.matmul(&b_l));
    }
    let int = int.scale(c64(-std::f64::consts::FRAC_PI_2 / eps));
    Ok((free, int))
}

/// Dense wrapper of [`build_h_lattice_sparse`] for small lattices.
pub fn build_h_lattice(spec: &LatticeSpec) -> Result<(Hamiltonian, Hamiltonian), CoreError> {
    enumerable_dim(spec, 1 << 10)?;
    let (free, int) = build_h_lattice_sparse(spec)?;
    Ok((
        Hamiltonian::from_matrix(free.to_dense(), spec.epsilon)?,
        Hamiltonian::from_matrix(int.to_dense(), spec.epsilon)?,
    ))
}

fn full_color_bilinear(spec: &LatticeSpec, x: usize, mover: Mover) -> SparseMatrix {
    let (s1, s2) = match mover {
        Mover::Right => (Species::R1, Species::R2),
        Mover::Left => (Species::L1, Species::L2),
    };
    let up = creator(spec, x, s1).matmul(&annihilator(spec, x, s2));
    let down = creator(spec, x, s2).matmul(&annihilator(spec, x, s1));
    up.sub(&down)
}

/// The lattice generators restricted to the one-right/one-left sector, built
/// directly from hop rules (no full-space operators, works at any size).
pub fn build_h_lattice_sector(sector: &Sector) -> (SparseMatrix, SparseMatrix) {
    let spec = sector.spec;
    let eps = spec.epsilon;
    let dim = sector.dim();
    let mut free = Vec::new();
    let mut int = Vec::new();
    for i in 0..dim {
        let config = sector.config(i);
        let (r, l) = two_particle_coords(&config, &spec);
        for dir in [1isize, -1isize] {
            let weight = dir as f64;
            // right movers: hop up carries +i/(2 eps), hop down -i/(2 eps)
            let x_new = spec.wrap(r.0 as isize + dir);
            let target = sector
                .index_of(&two_particle_config(&spec, (x_new, r.1), l))
                .expect("sector closed under hops");
            free.push((target, i, Complex64::new(0.0, weight * 0.5 / eps)));
            // left movers: opposite signs
            let x_new = spec.wrap(l.0 as isize + dir);
            let target = sector
                .index_of(&two_particle_config(&spec, r, (x_new, l.1)))
                .expect("sector closed under hops");
            free.push((target, i, Complex64::new(0.0, -weight * 0.5 / eps)));
        }
        // interaction: only on coincident movers, B (x) B on the color pair
        if r.0 == l.0 {
            let (r_new, ar) = color_rotation(r.1);
            let (l_new, al) = color_rotation(l.1);
            let target = sector
                .index_of(&two_particle_config(&spec, (r.0, r_new), (l.0, l_new)))
                .expect("sector closed under color flips");
            int.push((target, i, c64(-std::f64::consts::FRAC_PI_2 / eps * ar * al)));
        }
    }
    (
        SparseMatrix::from_triplets(dim, dim, free),
        SparseMatrix::from_triplets(dim, dim, int),
    )
}

fn two_particle_coords(
    config: &crate::lattice::BitConfig,
    spec: &LatticeSpec,
) -> ((usize, usize), (usize, usize)) {
    let mut right = None;
    let mut left = None;
    for x in 0..spec.m_x {
        for (ci, s) in [Species::R1, Species::R2].into_iter().enumerate() {
            if config.get(x, s) {
                right = Some((x, ci));
            }
        }
        for (ci, s) in [Species::L1, Species::L2].into_iter().enumerate() {
            if config.get(x, s) {
                left = Some((x, ci));
            }
        }
    }
    (right.expect("one right mover"), left.expect("one left mover"))
}

fn two_particle_config(
    spec: &LatticeSpec,
    r: (usize, usize),
    l: (usize, usize),
) -> crate::lattice::BitConfig {
    let r_species = [Species::R1, Species::R2][r.1];
    let l_species = [Species::L1, Species::L2][l.1];
    crate::lattice::BitConfig::with_particles(spec, &[(r.0, r_species), (l.0, l_species)])
}

/// `B |1> = -|2>`, `B |2> = +|1>` on a 0-indexed color.
fn color_rotation(c: usize) -> (usize, f64) {
    if c == 0 {
        (1, -1.0)
    } else {
        (0, 1.0)
    }
}

// ---------------------------------------------------------------------------
// Splitting comparison on smooth packets
// ---------------------------------------------------------------------------

/// Distances reported by [`trotter_compare`].
#[derive(Debug, Clone, Copy)]
pub struct TrotterDistances {
    /// exact automaton vs alternating exponentials
    pub automaton_vs_alternating: f64,
    /// exact automaton vs combined generator `exp(-i n eps (H_free + H_int))`
    pub automaton_vs_combined: f64,
    /// alternating vs combined
    pub alternating_vs_combined: f64,
}

/// A same-color two-particle Gaussian packet in the one-right/one-left
/// sector: per-particle envelope `exp(-(x - x0)^2 / (4 width^2))` (wrapped),
/// colors fixed to (1, 1) so the scatter channel closes on itself.
pub fn gaussian_two_particle_packet(
    sector: &Sector,
    center_r: usize,
    center_l: usize,
    width: f64,
) -> StateVector {
    let spec = sector.spec;
    let m = spec.m_x as f64;
    let envelope = |x: usize, x0: usize| -> f64 {
        let mut total = 0.0;
        for image in -2i64..=2 {
            let dx = x as f64 - x0 as f64 + image as f64 * m;
            total += (-dx * dx / (4.0 * width * width)).exp();
        }
        total
    };
    let mut v = StateVector::zeros(sector.dim());
    for i in 0..sector.dim() {
        let config = sector.config(i);
        let (r, l) = two_particle_coords(&config, &spec);
        if r.1 == 0 && l.1 == 0 {
            v.as_mut_slice()[i] = c64(envelope(r.0, center_r) * envelope(l.0, center_l));
        }
    }
    v.normalized()
}

/// Run the three evolutions for `n_steps` on a sector state and report the
/// pairwise L2 distances.
pub fn trotter_compare(
    sector: &Sector,
    q0: &StateVector,
    n_steps: usize,
) -> Result<TrotterDistances, CoreError> {
    let spec = sector.spec;
    let eps = spec.epsilon;
    let (h_free, h_int) = build_h_lattice_sector(sector);

    let mut exact = q0.clone();
    for _ in 0..n_steps {
        exact = sector.automaton_apply(&exact)?;
    }
    let mut alternating = q0.clone();
    for _ in 0..n_steps {
        alternating = crate::numerics::expm_multiply(&h_free, &alternating, eps);
        alternating = crate::numerics::expm_multiply(&h_int, &alternating, eps);
    }
    let combined_h = h_free.add(&h_int);
    let combined = crate::numerics::expm_multiply(&combined_h, q0, n_steps as f64 * eps);

    Ok(TrotterDistances {
        automaton_vs_alternating: exact.distance(&alternating),
        automaton_vs_combined: exact.distance(&combined),
        alternating_vs_combined: alternating.distance(&combined),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::step_operator::build_step_operator;

    fn spec(m_x: usize) -> LatticeSpec {
        LatticeSpec::new(m_x).unwrap()
    }

    #[test]
    fn ladder_operators_square_to_zero() {
        let a = annihilator_mode(3, 1);
        assert_eq!(a.matmul(&a).nnz(), 0);
        let c = creator_mode(3, 1);
        assert_eq!(c.matmul(&c).nnz(), 0);
    }

    #[test]
    fn annihilator_kills_empty_state() {
        let a = annihilator_mode(4, 2);
        let v = {
            let mut v = vec![Complex64::default(); 16];
            v[0] = c64(1.0);
            v
        };
        assert!(a.matvec(&v).iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn anticommutators_hold_exactly() {
        let sp = spec(2);
        let modes = sp.num_bits();
        let ops: Vec<(SparseMatrix, SparseMatrix)> = (0..modes)
            .map(|m| (annihilator_mode(modes, m), creator_mode(modes, m)))
            .collect();
        let id = SparseMatrix::identity(1 << modes);
        for i in 0..modes {
            for j in 0..modes {
                let aa = ops[i].0.anticommutator(&ops[j].0);
                assert!(aa.max_abs() < 1e-14, "{{a_{i}, a_{j}}} != 0");
                let cc = ops[i].1.anticommutator(&ops[j].1);
                assert!(cc.max_abs() < 1e-14);
                let ca = ops[i].1.anticommutator(&ops[j].0);
                let expected = if i == j {
                    id.clone()
                } else {
                    SparseMatrix::zeros(1 << modes, 1 << modes)
                };
                assert!(ca.max_diff(&expected) < 1e-14, "{{a^d_{i}, a_{j}}}");
            }
        }
    }

    #[test]
    fn scatter_generator_supported_on_scatter_nibbles() {
        let gen = site_scatter_generator();
        assert!(gen.nnz() > 0);
        for (r, c, _) in gen.triplets() {
            assert!([5usize, 6, 9, 10].contains(&r));
            assert!([5usize, 6, 9, 10].contains(&c));
        }
    }

    #[test]
    fn site_block_is_unitary_with_scatter_support() {
        let block = site_scatter_block();
        assert!(crate::numerics::unitarity_defect(&block) < 1e-12);
        let perm = build_step_operator(&spec(1), Factor::Int).unwrap().to_dense();
        for r in 0..16 {
            for c in 0..16 {
                let a = block[(r, c)].norm();
                let b = perm[(r, c)].norm();
                assert!((a - b).abs() < 1e-12, "support mismatch at ({r},{c})");
            }
        }
    }

    #[test]
    fn species_free_factor_single_particle_swap() {
        // two sites, one species: the singly-occupied states swap
        let m = build_s_free_fock_species(2, Mover::Right).unwrap();
        assert!((m.get(0, 0) - c64(1.0)).norm() < 1e-14);
        assert!((m.get(2, 1) - c64(1.0)).norm() < 1e-14);
        assert!((m.get(1, 2) - c64(1.0)).norm() < 1e-14);
        assert!(m.get(1, 1).norm() < 1e-14);
    }

    #[test]
    fn species_free_factor_matches_fermionic_lift() {
        // independent oracle: the second-quantized lift of the shift sends an
        // occupied set A to A+1 with the parity of the sorting permutation
        for sites in [2usize, 3] {
            for mover in [Mover::Right, Mover::Left] {
                let m = build_s_free_fock_species(sites, mover).unwrap();
                let dim = 1usize << sites;
                for source in 0..dim {
                    let occupied: Vec<usize> =
                        (0..sites).filter(|&b| source >> b & 1 == 1).collect();
                    let shifted: Vec<usize> = occupied
                        .iter()
                        .map(|&b| match mover {
                            Mover::Right => (b + 1) % sites,
                            Mover::Left => (b + sites - 1) % sites,
                        })
                        .collect();
                    let mut sorted = shifted.clone();
                    sorted.sort_unstable();
                    let target: usize = sorted.iter().map(|&b| 1usize << b).sum();
                    let mut sign = 1.0;
                    for i in 0..shifted.len() {
                        for j in i + 1..shifted.len() {
                            if shifted[i] > shifted[j] {
                                sign = -sign;
                            }
                        }
                    }
                    for row in 0..dim {
                        let expected = if row == target { sign } else { 0.0 };
                        assert!(
                            (m.get(row, source) - c64(expected)).norm() < 1e-12,
                            "sites={sites} source={source} row={row}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn h_lattice_single_particle_dispersion() {
        // oracle: DFT of the symmetric-difference circulant gives +-sin(2 pi k / M)
        let sp = spec(3);
        let (free, _) = build_h_lattice_sparse(&sp).unwrap();
        let sector = Sector::charge_sector(sp, 1, 0).unwrap();
        let dim = sector.dim();
        let mut block = DMatrix::<Complex64>::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                block[(i, j)] = free.get(sector.basis()[i] as usize, sector.basis()[j] as usize);
            }
        }
        let (values, _) = crate::numerics::hermitian_eigen(&block);
        let mut expected: Vec<f64> = (0..sp.m_x)
            .flat_map(|k| {
                let s = (2.0 * std::f64::consts::PI * k as f64 / sp.m_x as f64).sin();
                [s, s]
            })
            .collect();
        expected.sort_by(f64::total_cmp);
        for (a, b) in values.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn h_int_vanishes_below_two_particles() {
        let sp = spec(2);
        let (_, int) = build_h_lattice_sparse(&sp).unwrap();
        for (_, c, _) in int.triplets() {
            assert!((c as u32).count_ones() >= 2);
        }
    }

    #[test]
    fn h_int_connects_only_scatter_nibbles() {
        let sp = spec(1);
        let (_, int) = build_h_lattice_sparse(&sp).unwrap();
        for (r, c, _) in int.triplets() {
            assert!([5usize, 6, 9, 10].contains(&r));
            assert!([5usize, 6, 9, 10].contains(&c));
        }
    }

    #[test]
    fn lattice_hamiltonians_commute_with_charges() {
        for m_x in [2usize, 3] {
            let sp = spec(m_x);
            let (free, int) = build_h_lattice_sparse(&sp).unwrap();
            for h in [&free, &int] {
                assert!(h.sub(&h.dagger()).max_abs() < 1e-12, "hermiticity");
                for (r, c, _) in h.triplets() {
                    let cr = crate::lattice::BitConfig::from_index(r as u128, &sp).unwrap();
                    let cc = crate::lattice::BitConfig::from_index(c as u128, &sp).unwrap();
                    for kind in crate::lattice::ChargeKind::ALL {
                        assert_eq!(cr.charge(kind), cc.charge(kind));
                    }
                }
            }
        }
    }

    #[test]
    fn sector_hamiltonian_matches_full_space_restriction() {
        let sp = spec(3);
        let sector = Sector::one_right_one_left(sp);
        let (free_sector, int_sector) = build_h_lattice_sector(&sector);
        let (free, int) = build_h_lattice_sparse(&sp).unwrap();
        for (sparse, full) in [(&free_sector, &free), (&int_sector, &int)] {
            for i in 0..sector.dim() {
                for j in 0..sector.dim() {
                    let expected =
                        full.get(sector.basis()[i] as usize, sector.basis()[j] as usize);
                    assert!(
                        (sparse.get(i, j) - expected).norm() < 1e-12,
                        "entry ({i},{j})"
                    );
                }
            }
        }
    }

    #[test]
    fn trotter_zero_steps_all_distances_vanish() {
        let sp = spec(4);
        let sector = Sector::one_right_one_left(sp);
        let q0 = gaussian_two_particle_packet(&sector, 0, 2, 1.0);
        let d = trotter_compare(&sector, &q0, 0).unwrap();
        assert!(d.automaton_vs_alternating < 1e-13);
        assert!(d.automaton_vs_combined < 1e-13);
        assert!(d.alternating_vs_combined < 1e-13);
    }

    #[test]
    fn uniform_momentum_state_phases_align() {
        // width -> infinity limit: the zero-momentum pair state is an
        // eigenstate of every evolution with matching phases
        let sp = spec(8);
        let sector = Sector::one_right_one_left(sp);
        let q0 = gaussian_two_particle_packet(&sector, 0, 4, 1e6);
        let d = trotter_compare(&sector, &q0, 3).unwrap();
        assert!(d.automaton_vs_combined < 1e-8, "{}", d.automaton_vs_combined);
    }

    #[test]
    fn single_particle_transport_is_exact_in_the_fock_factor() {
        // one free particle: the normal-ordered factor acts exactly as the
        // shift, with no dispersion error
        let sp = spec(3);
        let sector = Sector::charge_sector(sp, 1, 0).unwrap();
        let m = build_s_free_fock(&sp).unwrap();
        let perm = build_step_operator(&sp, Factor::Free).unwrap();
        for i in 0..sector.dim() {
            let tau = sector.basis()[i] as usize;
            let target = perm.permutation().unwrap().target(tau);
            assert!((m.get(target, tau) - c64(1.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn number_operator_counts() {
        let n = number_mode(2, 1);
        assert!(n.get(0, 0).norm() < 1e-15);
        assert!((n.get(2, 2) - c64(1.0)).norm() < 1e-15);
        assert!((n.get(3, 3) - c64(1.0)).norm() < 1e-15);
    }
}
