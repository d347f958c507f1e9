//! Haar volumes of the compact open subgroups in play, and the constants
//! `c₁` and `C`, as exact rationals in the residue cardinality `q = q_F`.

use num_traits::One;

use crate::error::{Error, Result};
use crate::numerics::{rat_int, rat_pow, Rat};

fn check_q(q: u64) {
    assert!(q >= 2, "residue cardinality must be >= 2, got {q}");
}

fn check_c(c: u32) -> Result<()> {
    if c == 0 {
        return Err(Error::RejectedInput("congruence-subgroup volumes need c >= 1".into()));
    }
    Ok(())
}

fn check_n(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("the constants need n >= 1".into()));
    }
    Ok(())
}

/// `ζ(1) = (1 − q^{−1})^{−1}`.
pub fn zeta1(q: u64) -> Rat {
    check_q(q);
    (Rat::one() - rat_pow(q, -1)).recip()
}

/// `L(1, η) = (1 + q^{−1})^{−1}`.
pub fn l_eta(q: u64) -> Rat {
    check_q(q);
    (Rat::one() + rat_pow(q, -1)).recip()
}

/// `Π_{i=1}^{m} (1 − x^{−i})` for `x = sign·q`.
fn prod_one_minus(m: u32, q: u64, negate: bool) -> Rat {
    (1..=m as i64).fold(Rat::one(), |acc, i| {
        let mut t = rat_pow(q, -i);
        if negate && i % 2 == 1 {
            t = -t;
        }
        acc * (Rat::one() - t)
    })
}

/// `vol(GL_m(O)) = ζ(1) Π_{i=1}^{m} (1 − q^{−i})`, and 1 for `m = 0`.
pub fn vol_gl(m: u32, q: u64) -> Rat {
    check_q(q);
    if m == 0 {
        return Rat::one();
    }
    zeta1(q) * prod_one_minus(m, q, false)
}

/// `ζ(1) Π_{i=1}^{m} (1 − q^{−i})` read literally, so `m = 0` gives `ζ(1)`
/// rather than 1. The constant `C` is derived with this reading at `m = n − 1`.
pub fn vol_gl_literal(m: u32, q: u64) -> Rat {
    zeta1(q) * prod_one_minus(m, q, false)
}

/// `vol(K'^c_{n+1}) = ζ_E(1) q_E^{−c(n+1)} Π_{i=1}^{n} (1 − q_E^{−i})`.
pub fn vol_kprime_c(n: u32, c: u32, q_e: u64) -> Result<Rat> {
    check_c(c)?;
    Ok(zeta1(q_e) * rat_pow(q_e, -((c * (n + 1)) as i64)) * prod_one_minus(n, q_e, false))
}

/// `vol(K^c_{n+1} ∩ GL_{n+1}(O_F))`, the same shape over `q_F`.
pub fn vol_bmk_gl_f(n: u32, c: u32, q_f: u64) -> Result<Rat> {
    vol_kprime_c(n, c, q_f)
}

/// `vol(U(W)(O_F)) = L(1, η) Π_{i=1}^{m} (1 − (−q)^{−i})`.
pub fn vol_unitary_w(m: u32, q: u64) -> Rat {
    l_eta(q) * prod_one_minus(m, q, true)
}

/// `vol(U(V)(O_F)) = L(1, η) q^{−cn} (1 + q^{−1}) Π_{i=1}^{n} (1 − (−q)^{−i})`.
pub fn vol_unitary_v(n: u32, c: u32, q: u64) -> Result<Rat> {
    check_c(c)?;
    Ok(l_eta(q) * rat_pow(q, -((c * n) as i64)) * (Rat::one() + rat_pow(q, -1)) * prod_one_minus(n, q, true))
}

/// Index of `u(V)(O_F)` in its trace-pairing dual, `|(O_E/ϖ^c)^n| = q^{2cn}`.
pub fn dual_lattice_index(n: u32, c: u32, q: u64) -> Rat {
    check_q(q);
    rat_pow(q, 2 * (c * n) as i64)
}

/// Self-dual volume `vol(u(V)(O_F)) = index^{−1/2} = q^{−cn}`.
pub fn vol_lie_uv(n: u32, c: u32, q: u64) -> Result<Rat> {
    check_c(c)?;
    let index = dual_lattice_index(n, c, q);
    let e = exact_log(&index, q).expect("index is a power of q");
    Ok(rat_pow(q, -e / 2))
}

/// `vol(k₀) = q^{−cn−n²−1}`.
pub fn vol_k0_lie(n: u32, c: u32, q: u64) -> Result<Rat> {
    Ok(vol_lie_uv(n, c, q)? * rat_pow(q, -((n * n + 1) as i64)))
}

/// `vol(K₀) = L(1, η) vol(k₀)`.
pub fn vol_k0(n: u32, c: u32, q: u64) -> Result<Rat> {
    Ok(l_eta(q) * vol_k0_lie(n, c, q)?)
}

fn exact_log(x: &Rat, q: u64) -> Option<i64> {
    let mut e = 0i64;
    let mut y = x.clone();
    let qr = rat_int(q as i64);
    while y > Rat::one() {
        y /= &qr;
        e += 1;
    }
    (y == Rat::one()).then_some(e)
}

/// The two expressions for `c₁`: the volume quotient
/// `vol(K_n)² / (vol(GL_n(O_F)) vol(K'_n) vol(K^c_{n+1} ∩ GL_{n+1}(O_F)))`
/// and the expanded ζ-product form.
pub fn c1(n: u32, c: u32, q_f: u64) -> Result<(Rat, Rat)> {
    check_c(c)?;
    check_n(n)?;
    let q_e = q_f * q_f;
    let k_n = vol_unitary_w(n, q_f);
    let volume_form = &k_n * &k_n / (vol_gl(n, q_f) * vol_gl(n, q_e) * vol_bmk_gl_f(n, c, q_f)?);

    let l = l_eta(q_f);
    let zf = zeta1(q_f);
    let mut zeta_form = &l * &l / (&zf * &zf) / zeta1(q_e) * rat_pow(q_f, (c * (n + 1)) as i64);
    for i in 1..=n as i64 {
        let qi = rat_pow(q_f, -i);
        let signed = if i % 2 == 1 { -qi.clone() } else { qi.clone() };
        let num = Rat::one() - signed;
        let lo = Rat::one() - &qi;
        zeta_form *= &num * &num / (&lo * &lo * &lo * (Rat::one() + &qi));
    }
    Ok((volume_form, zeta_form))
}

/// `C = vol(K_n)² L(1, η) q^{−c(n+1)} (1 + q^{−n})`.
pub fn constant_c(n: u32, c: u32, q_f: u64) -> Result<Rat> {
    check_c(c)?;
    check_n(n)?;
    let k_n = vol_unitary_w(n, q_f);
    Ok(&k_n * &k_n * l_eta(q_f) * rat_pow(q_f, -((c * (n + 1)) as i64)) * (Rat::one() + rat_pow(q_f, -(n as i64))))
}

/// Every constant above for one `(n, c, q_F)`, labelled for display.
pub fn volume_table(n: u32, c: u32, q_f: u64) -> Result<Vec<(String, Rat)>> {
    check_c(c)?;
    check_n(n)?;
    if q_f < 2 {
        return Err(Error::InvalidArgument(format!("q_F = {q_f} < 2")));
    }
    let q_e = q_f * q_f;
    let (c1_vol, c1_zeta) = c1(n, c, q_f)?;
    let mut rows = vec![
        ("zeta_F(1)".into(), zeta1(q_f)),
        ("zeta_E(1)".into(), zeta1(q_e)),
        ("L(1,eta)".into(), l_eta(q_f)),
        (format!("vol(GL_{n}(O_F))"), vol_gl(n, q_f)),
        (format!("vol(GL_{}(O_F))", n + 1), vol_gl(n + 1, q_f)),
        (format!("vol(GL_{n}(O_E))"), vol_gl(n, q_e)),
        (format!("vol(GL_{}(O_E))", n.saturating_sub(1)), vol_gl(n.saturating_sub(1), q_e)),
        ("vol(K'^c_{n+1})".into(), vol_kprime_c(n, c, q_e)?),
        ("vol(K^c_{n+1} cap GL_{n+1}(O_F))".into(), vol_bmk_gl_f(n, c, q_f)?),
        ("vol(U(W)(O_F))".into(), vol_unitary_w(n, q_f)),
        ("vol(U(V)(O_F))".into(), vol_unitary_v(n, c, q_f)?),
        ("vol(u(V)(O_F))".into(), vol_lie_uv(n, c, q_f)?),
        ("dual lattice index".into(), dual_lattice_index(n, c, q_f)),
        ("vol(k_0)".into(), vol_k0_lie(n, c, q_f)?),
        ("vol(K_0)".into(), vol_k0(n, c, q_f)?),
        ("c1 (volume form)".into(), c1_vol),
        ("c1 (zeta form)".into(), c1_zeta),
        ("C".into(), constant_c(n, c, q_f)?),
    ];
    rows.dedup_by(|a, b| a.0 == b.0);
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;
    use num_traits::{Signed, Zero};

    #[test]
    fn gl_examples() {
        for q in [3, 5, 9] {
            assert_eq!(vol_gl(1, q), Rat::one());
        }
        assert_eq!(vol_gl(2, 3), rat(8, 9));
        assert_eq!(vol_gl(0, 7), Rat::one());
    }

    #[test]
    fn congruence_examples() {
        assert_eq!(vol_kprime_c(1, 1, 9).unwrap(), rat(1, 81));
        assert_eq!(vol_kprime_c(0, 1, 9).unwrap(), rat(9, 8) * rat(1, 9));
        assert!(matches!(vol_kprime_c(1, 0, 9), Err(Error::RejectedInput(_))));
        assert_eq!(vol_bmk_gl_f(1, 1, 3).unwrap(), rat(1, 9));
        assert_eq!(vol_bmk_gl_f(1, 2, 3).unwrap(), rat(1, 81));
        assert!(vol_bmk_gl_f(2, 0, 3).is_err());
    }

    #[test]
    fn unitary_examples() {
        for q in [3, 5, 27] {
            assert_eq!(vol_unitary_w(1, q), Rat::one());
            for c in 1..4 {
                for n in 0..4 {
                    assert_eq!(vol_lie_uv(n, c, q).unwrap(), rat_pow(q, -((c * n) as i64)));
                    assert_eq!(vol_k0_lie(n, c, q).unwrap(), rat_pow(q, -((c * n + n * n + 1) as i64)));
                }
            }
        }
        assert_eq!(vol_unitary_w(2, 3), rat(8, 9));
        assert!(vol_unitary_v(1, 0, 3).is_err());
    }

    #[test]
    fn c1_examples() {
        assert_eq!(c1(1, 1, 3).unwrap(), (rat(9, 1), rat(9, 1)));
        assert_eq!(c1(1, 2, 3).unwrap(), (rat(81, 1), rat(81, 1)));
        assert!(c1(1, 0, 3).is_err());
        assert!(c1(0, 1, 3).is_err());
    }

    #[test]
    fn c1_forms_agree_on_grid() {
        for q in [3, 5, 7, 9, 27] {
            for n in 1..=4 {
                for c in 1..=5 {
                    let (a, b) = c1(n, c, q).unwrap();
                    assert_eq!(a, b, "n={n} c={c} q={q}");
                }
            }
        }
    }

    #[test]
    fn constant_c_examples() {
        assert_eq!(constant_c(1, 1, 3).unwrap(), rat(1, 9));
        assert_eq!(constant_c(1, 3, 3).unwrap(), rat(1, 729));
        for q in [3, 5, 7] {
            for n in 1..4 {
                for c in 1..4 {
                    assert!(constant_c(n, c, q).unwrap().is_positive());
                }
            }
        }
    }

    // Brute-force group orders over F_9 = F_3[i] give independent checks of the
    // finite-field factors behind vol_gl and vol_unitary_w.
    type F9 = (i64, i64);

    fn mul9(a: F9, b: F9) -> F9 {
        ((a.0 * b.0 - a.1 * b.1).rem_euclid(3), (a.0 * b.1 + a.1 * b.0).rem_euclid(3))
    }

    fn add9(a: F9, b: F9) -> F9 {
        ((a.0 + b.0).rem_euclid(3), (a.1 + b.1).rem_euclid(3))
    }

    fn conj9(a: F9) -> F9 {
        (a.0, (-a.1).rem_euclid(3))
    }

    fn all9() -> Vec<F9> {
        (0..3).flat_map(|a| (0..3).map(move |b| (a, b))).collect()
    }

    #[test]
    fn finite_group_orders() {
        let f3: Vec<i64> = (0..3).collect();
        let mut gl2 = 0;
        for &a in &f3 {
            for &b in &f3 {
                for &c in &f3 {
                    for &d in &f3 {
                        if (a * d - b * c).rem_euclid(3) != 0 {
                            gl2 += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(gl2, 48);
        assert_eq!(vol_gl(2, 3), zeta1(3) * rat(gl2, 81));

        let els = all9();
        let mut u1 = 0;
        for &a in &els {
            if mul9(a, conj9(a)) == (1, 0) {
                u1 += 1;
            }
        }
        assert_eq!(u1, 4);
        let mut u2 = 0;
        for &a in &els {
            for &b in &els {
                for &c in &els {
                    for &d in &els {
                        // g^* g = I for g = [[a, b], [c, d]].
                        let e11 = add9(mul9(conj9(a), a), mul9(conj9(c), c));
                        let e12 = add9(mul9(conj9(a), b), mul9(conj9(c), d));
                        let e22 = add9(mul9(conj9(b), b), mul9(conj9(d), d));
                        if e11 == (1, 0) && e12 == (0, 0) && e22 == (1, 0) {
                            u2 += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(u2, 96);
        assert_eq!(vol_unitary_w(1, 3), l_eta(3) * rat(u1, 3));
        assert_eq!(vol_unitary_w(2, 3), l_eta(3) * rat(u2, 81));
    }

    #[test]
    fn table_is_positive() {
        let rows = volume_table(2, 1, 3).unwrap();
        assert!(rows.iter().all(|(_, v)| v.is_positive() && !v.is_zero()));
        assert!(volume_table(2, 0, 3).is_err());
    }
}
