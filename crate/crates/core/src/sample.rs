//! Seeded random symbols, words and vectors for property runs.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::gens::{all_symbols, column_symbol, eval_on_vector, validate, Letter, Payload, Symbol, Word};
use crate::group::{FGroup, PGroup};
use crate::ring::{El, MPoly};

pub use rand::SeedableRng;
pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every valid symbol with payloads from the whole ring.
pub fn symbol_pool(g: &FGroup) -> Vec<Symbol<El>> {
    all_symbols(g, &g.ring().elements().collect::<Vec<_>>())
}

/// A valid symbol with payloads drawn from `pool`, or None when nothing fits.
pub fn random_symbol_from(pool: &[Symbol<El>], rng: &mut Rng64) -> Option<Symbol<El>> {
    pool.choose(rng).cloned()
}

/// A word of `len` letters, about a third of them inverted.
pub fn random_word(pool: &[Symbol<El>], len: usize, rng: &mut Rng64) -> Word<El> {
    let mut w = Word::new();
    for _ in 0..len {
        if let Some(s) = random_symbol_from(pool, rng) {
            w.letters.push(Letter { sym: s, inv: rng.gen_bool(0.3) });
        }
    }
    w
}

/// v = eval(w)·e_{2n} for a random word w: isotropic and unimodular by construction.
pub fn random_isotropic_vector(g: &FGroup, pool: &[Symbol<El>], len: usize, rng: &mut Rng64) -> Vec<El> {
    let w = random_word(pool, len, rng);
    eval_on_vector(g, &w, &g.basis(g.dim() - 1)).expect("pool symbols are valid")
}

fn poly_from(coeffs: &[El]) -> MPoly {
    MPoly::from_coeffs(coeffs)
}

/// A symbol over R[X] of X-degree ≤ deg: coefficient k is the payload of a random base symbol of the same
/// shape. Column payloads get the least ζ_f. Retries until the symbol is valid.
pub fn random_poly_symbol(pg: &PGroup, pool: &[Symbol<El>], deg: usize, rng: &mut Rng64) -> Option<Symbol<MPoly>> {
    for _ in 0..64 {
        let s = pool.choose(rng)?;
        let same: Vec<&Symbol<El>> = pool.iter().filter(|t| (t.family, t.i, t.j) == (s.family, s.i, s.j)).collect();
        let sym = match &s.payload {
            Payload::Scalar(_) => {
                let cs: Vec<El> = (0..=deg).map(|_| *same.choose(rng).unwrap().scalar_payload().unwrap()).collect();
                Symbol::scalar(s.family, s.i, s.j, poly_from(&cs))
            }
            Payload::Column { zeta, .. } => {
                let mut cols: Vec<Vec<El>> = vec![Vec::new(); zeta.len()];
                for _ in 0..=deg {
                    let Payload::Column { zeta: z, .. } = &same.choose(rng).unwrap().payload else { unreachable!() };
                    for (c, x) in cols.iter_mut().zip(z) {
                        c.push(*x);
                    }
                }
                match column_symbol(pg, s.family, s.i, cols.iter().map(|c| poly_from(c)).collect()) {
                    Some(t) => t,
                    None => continue,
                }
            }
        };
        if validate(pg, &sym).is_ok() {
            return Some(sym);
        }
    }
    None
}

/// A word over R[X] of X-degree ≤ deg.
pub fn random_poly_word(pg: &PGroup, pool: &[Symbol<El>], deg: usize, len: usize, rng: &mut Rng64) -> Word<MPoly> {
    let mut w = Word::new();
    for _ in 0..len {
        if let Some(s) = random_poly_symbol(pg, pool, deg, rng) {
            w.letters.push(Letter { sym: s, inv: rng.gen_bool(0.3) });
        }
    }
    w
}

/// A word over R[X] whose value at X = 0 is I: w · w(0)⁻¹ with w(0) read over R.
pub fn random_poly_word_trivial_at_zero(pg: &PGroup, pool: &[Symbol<El>], deg: usize, len: usize, rng: &mut Rng64) -> Word<MPoly> {
    let w = random_poly_word(pg, pool, deg, len, rng);
    let at0 = crate::gens::specialize_word(pg, &w, 0, 0);
    w.concat(&crate::gens::lift_word(&at0).inverse())
}

/// Symbols all of whose off-diagonal entries lie in the ideal (given as a membership test).
pub fn congruent_pool(g: &FGroup, in_ideal: impl Fn(El) -> bool) -> Vec<Symbol<El>> {
    let pool: Vec<El> = g.ring().elements().filter(|&x| in_ideal(x)).collect();
    all_symbols(g, &pool)
        .into_iter()
        .filter(|s| {
            crate::gens::entries(g, s).iter().all(|&(p, q, v)| if p == q { in_ideal(g.ring().sub(v, g.ring().one())) } else { in_ideal(v) })
        })
        .collect()
}
