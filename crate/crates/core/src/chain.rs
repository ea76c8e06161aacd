//! Periodic chain geometry, bit-packed site configurations, symmetry sectors
//! and state vectors over a sector.
//!
//! Sites are numbered `1..=N` everywhere in the public interface; site `α`
//! sits at `η_α = exp(2πiα/N)` on the unit circle. Each site holds an up
//! electron, a down electron or a hole, packed two bits per site into a
//! `u64` (site `α` occupies bits `2(α-1)` and `2(α-1)+1`).

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest chain length representable in one packed word.
pub const MAX_SITES: usize = 32;

/// Largest sector that [`SectorBasis::enumerate`] will materialise.
pub const MAX_SECTOR_SIZE: usize = 1 << 26;

const LOW_BITS: u64 = 0x5555_5555_5555_5555;

/// Points `η_α` of an `N`-site ring embedded in the unit circle.
#[derive(Clone, Debug)]
pub struct ChainGeometry<T: Real> {
    n_sites: usize,
    coords: Vec<Complex<T>>,
}

impl<T: Real> ChainGeometry<T> {
    pub fn new(n_sites: usize) -> Result<Self> {
        if n_sites == 0 || n_sites > MAX_SITES {
            return Err(Error::invalid(format!(
                "chain length must be in 1..={MAX_SITES}, got {n_sites}"
            )));
        }
        let coords = (1..=n_sites)
            .map(|alpha| Complex::from_polar(T::one(), Self::angle_of(n_sites, alpha as i64)))
            .collect();
        Ok(Self { n_sites, coords })
    }

    fn angle_of(n_sites: usize, alpha: i64) -> T {
        let k = alpha.rem_euclid(n_sites as i64);
        T::TAU() * T::from_int(k) / T::from_count(n_sites)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    fn check_site(&self, site: usize) -> Result<()> {
        if site == 0 || site > self.n_sites {
            return Err(Error::invalid(format!("site {site} outside 1..={}", self.n_sites)));
        }
        Ok(())
    }

    /// `η_α` for `α` in `1..=N`.
    pub fn site_coordinate(&self, site: usize) -> Result<Complex<T>> {
        self.check_site(site)?;
        Ok(self.coords[site - 1])
    }

    /// Coordinates indexed from zero (`coords()[α-1] = η_α`).
    pub fn coords(&self) -> &[Complex<T>] {
        &self.coords
    }

    /// `|η_α - η_β|² = 4 sin²(π(α-β)/N)`.
    pub fn chord_distance_squared(&self, alpha: usize, beta: usize) -> Result<T> {
        self.check_site(alpha)?;
        self.check_site(beta)?;
        if alpha == beta {
            return Err(Error::invalid(format!(
                "chord distance needs distinct sites, got {alpha} twice"
            )));
        }
        Ok(chord_squared_by_separation(
            self.n_sites,
            (alpha as i64 - beta as i64).unsigned_abs() as usize,
        ))
    }
}

/// `4 sin²(π δ / N)`, a function of the separation only.
pub(crate) fn chord_squared_by_separation<T: Real>(n_sites: usize, delta: usize) -> T {
    let s = (T::PI() * T::from_count(delta) / T::from_count(n_sites)).sin();
    T::lit(4.0) * s * s
}

/// Content of one site.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Occupation {
    Hole = 0,
    Up = 1,
    Down = 2,
}

impl Occupation {
    fn from_bits(bits: u64) -> Option<Self> {
        match bits {
            0 => Some(Occupation::Hole),
            1 => Some(Occupation::Up),
            2 => Some(Occupation::Down),
            _ => None,
        }
    }

    pub fn is_electron(self) -> bool {
        self != Occupation::Hole
    }

    fn symbol(self) -> char {
        match self {
            Occupation::Hole => '.',
            Occupation::Up => 'u',
            Occupation::Down => 'd',
        }
    }
}

/// Packed site contents of one basis configuration.
///
/// The word carries no length; methods that need `N` take it explicitly.
/// Unused high bits are always zero.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Configuration(u64);

fn site_mask(n_sites: usize) -> u64 {
    if n_sites >= MAX_SITES {
        u64::MAX
    } else {
        (1u64 << (2 * n_sites)) - 1
    }
}

impl Configuration {
    pub fn pack(sites: &[Occupation]) -> Result<Self> {
        if sites.len() > MAX_SITES {
            return Err(Error::invalid(format!(
                "at most {MAX_SITES} sites fit in a packed word, got {}",
                sites.len()
            )));
        }
        let word = sites
            .iter()
            .enumerate()
            .fold(0u64, |w, (i, &occ)| w | ((occ as u64) << (2 * i)));
        Ok(Configuration(word))
    }

    /// Validating constructor from a raw packed word.
    pub fn from_word(word: u64, n_sites: usize) -> Result<Self> {
        if n_sites > MAX_SITES || word & !site_mask(n_sites) != 0 {
            return Err(Error::invalid(format!(
                "word {word:#x} has bits beyond {n_sites} sites"
            )));
        }
        if (word & (word >> 1) & LOW_BITS) != 0 {
            return Err(Error::invalid(format!(
                "word {word:#x} contains an invalid 0b11 site code"
            )));
        }
        Ok(Configuration(word))
    }

    pub fn word(self) -> u64 {
        self.0
    }

    pub fn unpack(self, n_sites: usize) -> Vec<Occupation> {
        (0..n_sites).map(|i| self.at(i)).collect()
    }

    /// Content of the 1-based `site`.
    pub fn occupation(self, site: usize) -> Occupation {
        assert!((1..=MAX_SITES).contains(&site), "site {site} out of range");
        self.at(site - 1)
    }

    #[inline]
    pub(crate) fn at(self, idx: usize) -> Occupation {
        Occupation::from_bits((self.0 >> (2 * idx)) & 0b11).expect("valid packed site code")
    }

    pub fn n_up(self) -> usize {
        (self.0 & LOW_BITS).count_ones() as usize
    }

    pub fn n_down(self) -> usize {
        (self.0 & (LOW_BITS << 1)).count_ones() as usize
    }

    pub fn n_electrons(self) -> usize {
        self.electron_bits().count_ones() as usize
    }

    pub fn n_holes(self, n_sites: usize) -> usize {
        n_sites - self.n_electrons()
    }

    pub fn key(self, n_sites: usize) -> SectorKey {
        SectorKey {
            n_holes: self.n_holes(n_sites),
            n_up: self.n_up(),
        }
    }

    /// One set bit (at the even position `2i`) per occupied site `i`.
    #[inline]
    fn electron_bits(self) -> u64 {
        (self.0 | (self.0 >> 1)) & LOW_BITS
    }

    /// Electrons on sites strictly between zero-based `i < j`.
    #[inline]
    pub(crate) fn electrons_between(self, i: usize, j: usize) -> u32 {
        debug_assert!(i < j);
        let lo = 2 * (i + 1);
        let hi = 2 * j;
        if hi <= lo {
            return 0;
        }
        let range = if hi >= 64 { u64::MAX } else { (1u64 << hi) - 1 } & !((1u64 << lo) - 1);
        (self.electron_bits() & range).count_ones()
    }

    /// Exchange the contents of zero-based sites `i` and `j`.
    #[inline]
    pub(crate) fn swapped(self, i: usize, j: usize) -> Self {
        let a = (self.0 >> (2 * i)) & 0b11;
        let b = (self.0 >> (2 * j)) & 0b11;
        let x = a ^ b;
        Configuration(self.0 ^ (x << (2 * i)) ^ (x << (2 * j)))
    }

    /// Contents of site `α` moved to `α+1`, site `N` wrapping to site 1.
    #[inline]
    pub fn translated(self, n_sites: usize) -> Self {
        let top = 2 * (n_sites - 1);
        Configuration(((self.0 << 2) | (self.0 >> top)) & site_mask(n_sites))
    }

    /// 1-based sites holding an up electron, ascending.
    pub fn up_sites(self, n_sites: usize) -> impl Iterator<Item = usize> {
        (0..n_sites)
            .filter(move |&i| self.at(i) == Occupation::Up)
            .map(|i| i + 1)
    }

    /// 1-based hole sites, ascending.
    pub fn hole_sites(self, n_sites: usize) -> impl Iterator<Item = usize> {
        (0..n_sites)
            .filter(move |&i| self.at(i) == Occupation::Hole)
            .map(|i| i + 1)
    }

    pub fn display(self, n_sites: usize) -> String {
        self.unpack(n_sites).into_iter().map(Occupation::symbol).collect()
    }
}

/// Conserved quantum numbers of the hopping Hamiltonian: hole number and
/// up-electron number (equivalently `2 S_z = n_up - n_down`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SectorKey {
    pub n_holes: usize,
    pub n_up: usize,
}

impl SectorKey {
    pub fn new(n_holes: usize, n_up: usize) -> Self {
        Self { n_holes, n_up }
    }

    pub fn validate(&self, n_sites: usize) -> Result<()> {
        if self.n_holes + self.n_up > n_sites {
            return Err(Error::invalid(format!(
                "sector Q={} M_up={} does not fit on {n_sites} sites",
                self.n_holes, self.n_up
            )));
        }
        Ok(())
    }

    pub fn n_down(&self, n_sites: usize) -> usize {
        n_sites - self.n_holes - self.n_up
    }

    pub fn two_sz(&self, n_sites: usize) -> i64 {
        self.n_up as i64 - self.n_down(n_sites) as i64
    }

    /// `binom(N, Q) · binom(N-Q, M_up)`, saturating.
    pub fn dimension(&self, n_sites: usize) -> usize {
        binomial(n_sites, self.n_holes).saturating_mul(binomial(n_sites - self.n_holes, self.n_up))
    }
}

impl fmt::Display for SectorKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q={},Mup={}", self.n_holes, self.n_up)
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    usize::try_from(acc).unwrap_or(usize::MAX)
}

/// All configurations of one sector in ascending packed-word order.
#[derive(Debug, PartialEq, Eq)]
pub struct SectorBasis {
    n_sites: usize,
    key: SectorKey,
    configs: Vec<Configuration>,
}

impl SectorBasis {
    pub fn enumerate(n_sites: usize, key: SectorKey) -> Result<Arc<Self>> {
        if n_sites == 0 || n_sites > MAX_SITES {
            return Err(Error::invalid(format!(
                "chain length must be in 1..={MAX_SITES}, got {n_sites}"
            )));
        }
        key.validate(n_sites)?;
        let size = key.dimension(n_sites);
        if size > MAX_SECTOR_SIZE {
            return Err(Error::Capacity {
                what: format!("sector {key} of N={n_sites}"),
                size,
                limit: MAX_SECTOR_SIZE,
            });
        }
        let mut configs = Vec::with_capacity(size);
        // Fill from the most significant site down, trying codes in
        // ascending order, so output is already sorted.
        fill(n_sites, 0, key.n_holes, key.n_up, key.n_down(n_sites), &mut configs);
        debug_assert_eq!(configs.len(), size);
        Ok(Arc::new(Self { n_sites, key, configs }))
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn key(&self) -> SectorKey {
        self.key
    }

    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    pub fn configs(&self) -> &[Configuration] {
        &self.configs
    }

    pub fn config(&self, idx: usize) -> Configuration {
        self.configs[idx]
    }

    /// Position of `config`, by binary search.
    pub fn index_of(&self, config: Configuration) -> Option<usize> {
        self.configs.binary_search(&config).ok()
    }

    pub(crate) fn same_sector(&self, other: &SectorBasis) -> bool {
        self.n_sites == other.n_sites && self.key == other.key
    }
}

fn fill(remaining_sites: usize, prefix: u64, holes: usize, ups: usize, downs: usize, out: &mut Vec<Configuration>) {
    if remaining_sites == 0 {
        out.push(Configuration(prefix));
        return;
    }
    let shift = 2 * (remaining_sites - 1);
    if holes > 0 {
        fill(remaining_sites - 1, prefix, holes - 1, ups, downs, out);
    }
    if ups > 0 {
        fill(remaining_sites - 1, prefix | (1 << shift), holes, ups - 1, downs, out);
    }
    if downs > 0 {
        fill(remaining_sites - 1, prefix | (2 << shift), holes, ups, downs - 1, out);
    }
}

/// Sign picked up by the site-ordered fermionic basis state when the
/// electron on site `N` wraps around to site 1.
#[inline]
pub(crate) fn translation_sign(config: Configuration, n_sites: usize) -> bool {
    config.at(n_sites - 1).is_electron() && config.n_electrons().is_multiple_of(2)
}

/// Complex amplitudes over the configurations of one sector.
#[derive(Clone, Debug)]
pub struct StateVector<T: Real> {
    sector: Arc<SectorBasis>,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    pub fn zeros(sector: Arc<SectorBasis>) -> Self {
        let amplitudes = vec![Complex::zero(); sector.len()];
        Self { sector, amplitudes }
    }

    pub fn from_amplitudes(sector: Arc<SectorBasis>, amplitudes: Vec<Complex<T>>) -> Result<Self> {
        if amplitudes.len() != sector.len() {
            return Err(Error::invalid(format!(
                "{} amplitudes for a sector of size {}",
                amplitudes.len(),
                sector.len()
            )));
        }
        Ok(Self { sector, amplitudes })
    }

    /// Unit vector on basis position `idx`.
    pub fn basis(sector: Arc<SectorBasis>, idx: usize) -> Result<Self> {
        if idx >= sector.len() {
            return Err(Error::invalid(format!(
                "basis index {idx} outside sector of size {}",
                sector.len()
            )));
        }
        let mut v = Self::zeros(sector);
        v.amplitudes[idx] = Complex::new(T::one(), T::zero());
        Ok(v)
    }

    /// Real and imaginary parts uniform in `[-1, 1)`.
    pub fn random<R: Rng + ?Sized>(sector: Arc<SectorBasis>, rng: &mut R) -> Self {
        let amplitudes = (0..sector.len())
            .map(|_| Complex::new(T::lit(rng.random_range(-1.0..1.0)), T::lit(rng.random_range(-1.0..1.0))))
            .collect();
        Self { sector, amplitudes }
    }

    pub fn sector(&self) -> &Arc<SectorBasis> {
        &self.sector
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitude_of(&self, config: Configuration) -> Option<Complex<T>> {
        self.sector.index_of(config).map(|i| self.amplitudes[i])
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.amplitudes.iter().map(|a| a.norm()).fold(T::zero(), T::max)
    }

    pub(crate) fn check_same_sector(&self, other: &Self) -> Result<()> {
        if !self.sector.same_sector(&other.sector) {
            return Err(Error::invalid(format!(
                "sector mismatch: N={} {} vs N={} {}",
                self.sector.n_sites(),
                self.sector.key(),
                other.sector.n_sites(),
                other.sector.key()
            )));
        }
        Ok(())
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        self.check_same_sector(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .fold(Complex::zero(), |acc, x| acc + x))
    }

    pub fn scale(&mut self, factor: Complex<T>) {
        for a in &mut self.amplitudes {
            *a *= factor;
        }
    }

    /// `self += factor · other`.
    pub fn axpy(&mut self, factor: Complex<T>, other: &Self) -> Result<()> {
        self.check_same_sector(other)?;
        for (a, b) in self.amplitudes.iter_mut().zip(&other.amplitudes) {
            *a += factor * b;
        }
        Ok(())
    }

    pub fn with_amplitudes(&self, amplitudes: Vec<Complex<T>>) -> Result<Self> {
        Self::from_amplitudes(self.sector.clone(), amplitudes)
    }
}

/// One-site translation `T`: the content of site `α` moves to `α+1`.
///
/// `T` acts on site-ordered fermionic basis states, so a configuration whose
/// site `N` holds an electron picks up `(-1)^(N_e - 1)` as that electron
/// wraps to site 1. `T` is unitary and `T^N = 1` on every sector.
pub fn apply_translation<T: Real>(state: &StateVector<T>) -> StateVector<T> {
    let sector = state.sector();
    let n = sector.n_sites();
    let mut out = vec![Complex::zero(); state.len()];
    for (idx, (&config, &amp)) in sector.configs().iter().zip(state.amplitudes()).enumerate() {
        let target = sector
            .index_of(config.translated(n))
            .unwrap_or_else(|| panic!("translation left sector at basis index {idx}"));
        out[target] = if translation_sign(config, n) { -amp } else { amp };
    }
    StateVector {
        sector: sector.clone(),
        amplitudes: out,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn chord_distances() {
        let g4 = ChainGeometry::<f64>::new(4).unwrap();
        assert!((g4.chord_distance_squared(1, 3).unwrap() - 4.0).abs() < 1e-15);
        let g6 = ChainGeometry::<f64>::new(6).unwrap();
        assert!((g6.chord_distance_squared(2, 3).unwrap() - 1.0).abs() < 1e-15);
        assert!(g6.chord_distance_squared(2, 2).is_err());
        assert!(g6.chord_distance_squared(0, 2).is_err());
        assert!(g6.chord_distance_squared(1, 7).is_err());
    }

    #[test]
    fn inverse_chord_sum_matches_closed_form() {
        // Brute-force sum against (N^2 - 1)/12.
        for n in 2..=MAX_SITES {
            let g = ChainGeometry::<f64>::new(n).unwrap();
            for alpha in [1, n / 2 + 1, n] {
                let direct: f64 = (1..=n)
                    .filter(|&b| b != alpha)
                    .map(|b| {
                        let d = g.site_coordinate(alpha).unwrap() - g.site_coordinate(b).unwrap();
                        1.0 / d.norm_sqr()
                    })
                    .sum();
                let closed = (n * n - 1) as f64 / 12.0;
                assert!((direct - closed).abs() < 1e-10 * closed.max(1.0), "N={n}");
            }
        }
        for n in 2..=64usize {
            let direct: f64 = (1..n).map(|d| 1.0 / chord_squared_by_separation::<f64>(n, d)).sum();
            let closed = (n * n - 1) as f64 / 12.0;
            assert!((direct - closed).abs() < 1e-10 * closed, "N={n}");
        }
        let g6 = ChainGeometry::<f64>::new(6).unwrap();
        let s: f64 = (2..=6).map(|b| 1.0 / g6.chord_distance_squared(1, b).unwrap()).sum();
        assert!((s - 35.0 / 12.0).abs() < 1e-12);
    }

    #[test]
    fn coordinates_are_roots_of_unity() {
        let g = ChainGeometry::<f64>::new(7).unwrap();
        for (i, z) in g.coords().iter().enumerate() {
            assert!((z.norm() - 1.0).abs() < 1e-15);
            assert!((z.powu(7) - Complex::new(1.0, 0.0)).norm() < 1e-13);
            for w in &g.coords()[i + 1..] {
                assert!((z - w).norm() > 0.1);
            }
        }
        assert!(ChainGeometry::<f64>::new(0).is_err());
        assert!(ChainGeometry::<f64>::new(33).is_err());
    }

    #[test]
    fn sector_sizes() {
        assert_eq!(SectorBasis::enumerate(4, SectorKey::new(0, 2)).unwrap().len(), 6);
        assert_eq!(SectorBasis::enumerate(4, SectorKey::new(2, 1)).unwrap().len(), 12);
        assert_eq!(SectorBasis::enumerate(2, SectorKey::new(0, 1)).unwrap().len(), 2);
        assert!(SectorBasis::enumerate(4, SectorKey::new(3, 2)).is_err());
    }

    #[test]
    fn sector_sizes_sum_to_full_space() {
        for n in 1..=10usize {
            let mut all = 0;
            let mut spin_only = 0;
            for q in 0..=n {
                for up in 0..=(n - q) {
                    let sector = SectorBasis::enumerate(n, SectorKey::new(q, up)).unwrap();
                    all += sector.len();
                    if q == 0 {
                        spin_only += sector.len();
                    }
                }
            }
            assert_eq!(all, 3usize.pow(n as u32));
            assert_eq!(spin_only, 1 << n);
        }
    }

    #[test]
    fn enumeration_is_sorted_and_indexed() {
        let sector = SectorBasis::enumerate(7, SectorKey::new(2, 3)).unwrap();
        assert!(sector.configs().windows(2).all(|w| w[0] < w[1]));
        for (i, &c) in sector.configs().iter().enumerate() {
            assert_eq!(sector.index_of(c), Some(i));
            assert_eq!(c.key(7), sector.key());
        }
    }

    #[test]
    fn translation_moves_contents_by_one_site() {
        use Occupation::*;
        let c = Configuration::pack(&[Up, Hole, Down, Down]).unwrap();
        let t = c.translated(4);
        assert_eq!(t.unpack(4), vec![Down, Up, Hole, Down]);
        assert_eq!(c.display(4), "u.dd");
        assert_eq!(Configuration::from_word(c.word(), 4).unwrap(), c);
        assert!(Configuration::from_word(0b11, 4).is_err());
        assert!(Configuration::from_word(1 << 8, 4).is_err());
    }

    #[test]
    fn translated_basis_state_without_wrapping_keeps_amplitude() {
        use Occupation::*;
        let sector = SectorBasis::enumerate(5, SectorKey::new(1, 2)).unwrap();
        let c = Configuration::pack(&[Up, Down, Up, Down, Hole]).unwrap();
        let v = StateVector::<f64>::basis(sector.clone(), sector.index_of(c).unwrap()).unwrap();
        let tv = apply_translation(&v);
        let target = Configuration::pack(&[Hole, Up, Down, Up, Down]).unwrap();
        assert_eq!(tv.amplitude_of(target).unwrap(), Complex::new(1.0, 0.0));
        assert!((tv.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn wrapping_electron_carries_fermion_sign() {
        use Occupation::*;
        // Four electrons: the one on site N passes three others.
        let sector = SectorBasis::enumerate(5, SectorKey::new(1, 2)).unwrap();
        let c = Configuration::pack(&[Up, Hole, Down, Up, Down]).unwrap();
        let v = StateVector::<f64>::basis(sector.clone(), sector.index_of(c).unwrap()).unwrap();
        let tv = apply_translation(&v);
        assert_eq!(tv.amplitude_of(c.translated(5)).unwrap(), Complex::new(-1.0, 0.0));
    }

    #[test]
    fn translation_is_unitary_with_period_n() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let sector = SectorBasis::enumerate(8, SectorKey::new(2, 3)).unwrap();
        for _ in 0..100 {
            let v = StateVector::<f64>::random(sector.clone(), &mut rng);
            let tv = apply_translation(&v);
            assert!((tv.norm() - v.norm()).abs() < 1e-14 * v.norm());
        }
        for key in [SectorKey::new(0, 3), SectorKey::new(1, 2), SectorKey::new(2, 2)] {
            let sector = SectorBasis::enumerate(6, key).unwrap();
            let v = StateVector::<f64>::random(sector, &mut rng);
            let mut w = v.clone();
            for _ in 0..6 {
                w = apply_translation(&w);
            }
            let mut diff = w.clone();
            diff.axpy(Complex::new(-1.0, 0.0), &v).unwrap();
            assert!(diff.norm() < 1e-14 * v.norm(), "{key}");
        }
    }

    #[test]
    fn inner_product_rejects_foreign_sector() {
        let a = SectorBasis::enumerate(4, SectorKey::new(0, 2)).unwrap();
        let b = SectorBasis::enumerate(4, SectorKey::new(0, 1)).unwrap();
        let u = StateVector::<f64>::zeros(a);
        let v = StateVector::<f64>::zeros(b);
        assert!(u.inner(&v).is_err());
        assert!(StateVector::<f64>::from_amplitudes(u.sector().clone(), vec![]).is_err());
    }

    #[test]
    fn electrons_between_counts_interior_sites() {
        use Occupation::*;
        let c = Configuration::pack(&[Up, Hole, Down, Up, Hole, Down]).unwrap();
        assert_eq!(c.electrons_between(0, 5), 2);
        assert_eq!(c.electrons_between(1, 4), 2);
        assert_eq!(c.electrons_between(2, 3), 0);
        assert_eq!(c.electrons_between(1, 3), 1);
        let full = Configuration::pack(&[Up; 32]).unwrap();
        assert_eq!(full.electrons_between(0, 31), 30);
    }
}
