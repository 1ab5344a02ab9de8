use super::{gcd, inv_mod, mul_mod};
use crate::error::{CacError, Result};

/// The ring isomorphism `Z_{a·q} → Z_a × Z_q` for coprime `a`, `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Crt {
    a: u64,
    q: u64,
    // a^{-1} mod q
    a_inv: u64,
}

impl Crt {
    pub fn new(a: u64, q: u64) -> Result<Self> {
        if a == 0 || q == 0 {
            return Err(CacError::invalid("CRT moduli must be positive"));
        }
        if gcd(a, q) != 1 {
            return Err(CacError::precondition(format!(
                "gcd({a}, {q}) = {} is not 1",
                gcd(a, q)
            )));
        }
        a.checked_mul(q)
            .filter(|n| *n < (1u64 << 63))
            .ok_or_else(|| CacError::invalid(format!("{a}·{q} exceeds the 2^63 modulus cap")))?;
        let a_inv = inv_mod(a % q, q).expect("coprime moduli");
        Ok(Self { a, q, a_inv })
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> u64 {
        self.a * self.q
    }

    pub fn split(&self, x: u64) -> (u64, u64) {
        (x % self.a, x % self.q)
    }

    /// Inverse of [`split`](Self::split); components are reduced first.
    pub fn join(&self, xa: u64, xq: u64) -> u64 {
        let (xa, xq) = (xa % self.a, xq % self.q);
        // x = xa + a·t with a·t ≡ xq - xa (mod q)
        let diff = (xq + self.q - xa % self.q) % self.q;
        let t = mul_mod(diff, self.a_inv, self.q);
        xa + self.a * t
    }
}

pub fn crt_split(x: u64, a: u64, q: u64) -> Result<(u64, u64)> {
    let crt = Crt::new(a, q)?;
    if x >= crt.modulus() {
        return Err(CacError::invalid(format!("{x} is not a residue mod {}", crt.modulus())));
    }
    Ok(crt.split(x))
}

pub fn crt_join(pair: (u64, u64), a: u64, q: u64) -> Result<u64> {
    let crt = Crt::new(a, q)?;
    if pair.0 >= a || pair.1 >= q {
        return Err(CacError::invalid(format!("({}, {}) is not in Z_{a} × Z_{q}", pair.0, pair.1)));
    }
    Ok(crt.join(pair.0, pair.1))
}
