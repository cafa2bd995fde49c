//! Segmented prime sieve, von Mangoldt function and Selberg's smoothed weight.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

const SEGMENT_BYTES: usize = 1 << 16;
const CACHE_MAGIC: &[u8; 8] = b"MZSIEVE1";

/// Primes up to a limit, with on-demand prime-power lookup.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u32>,
}

/// A prime power `n = p^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimePower {
    pub n: u64,
    pub p: u64,
    pub k: u32,
}

impl PrimePower {
    /// `log p`, the value of the von Mangoldt function at `n`.
    pub fn log_p(&self) -> f64 {
        (self.p as f64).ln()
    }
}

/// Sieve all primes `<= limit`.
pub fn sieve(limit: u64) -> Result<PrimeTable> {
    if limit < 2 {
        return Err(Error::Domain(format!("sieve limit must be at least 2, got {limit}")));
    }
    if limit > u32::MAX as u64 {
        return Err(Error::Domain(format!("sieve limit {limit} exceeds 32-bit prime storage")));
    }
    let base_limit = isqrt(limit);
    let base = simple_sieve(base_limit);

    let mut primes: Vec<u32> = vec![2];
    // Segments cover odd numbers only: bit j of a segment starting at odd
    // `lo` stands for lo + 2j.
    let span = (SEGMENT_BYTES * 2) as u64;
    let mut lo = 3u64;
    let mut composite = vec![false; SEGMENT_BYTES];
    while lo <= limit {
        let hi = (lo + span - 1).min(limit);
        let len = ((hi - lo) / 2 + 1) as usize;
        composite[..len].iter_mut().for_each(|c| *c = false);
        for &p in base.iter().skip(1) {
            let p = p as u64;
            if p * p > hi {
                break;
            }
            let mut start = (p * p).max(lo.div_ceil(p) * p);
            if start.is_multiple_of(2) {
                start += p;
            }
            let mut j = ((start - lo) / 2) as usize;
            while j < len {
                composite[j] = true;
                j += p as usize;
            }
        }
        for (j, &c) in composite[..len].iter().enumerate() {
            if !c {
                primes.push((lo + 2 * j as u64) as u32);
            }
        }
        lo = if hi.is_multiple_of(2) { hi + 1 } else { hi + 2 };
    }
    Ok(PrimeTable { limit, primes })
}

fn simple_sieve(limit: u64) -> Vec<u32> {
    let n = limit as usize;
    let mut is_p = vec![true; n + 1];
    is_p[0] = false;
    if n >= 1 {
        is_p[1] = false;
    }
    let mut i = 2;
    while i * i <= n {
        if is_p[i] {
            let mut j = i * i;
            while j <= n {
                is_p[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    is_p.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u32).collect()
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Largest `r` with `r^k <= n`.
fn iroot(n: u64, k: u32) -> u64 {
    let mut r = (n as f64).powf(1.0 / k as f64).round() as u64;
    while r > 0 && r.checked_pow(k).is_none_or(|v| v > n) {
        r -= 1;
    }
    while (r + 1).checked_pow(k).is_some_and(|v| v <= n) {
        r += 1;
    }
    r
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Number of primes `<= x` (x may not exceed the limit).
    pub fn count_up_to(&self, x: u64) -> usize {
        self.primes.partition_point(|&p| (p as u64) <= x)
    }

    pub fn is_prime(&self, n: u64) -> Result<bool> {
        self.check_range(n)?;
        Ok(n <= u32::MAX as u64 && self.primes.binary_search(&(n as u32)).is_ok())
    }

    fn check_range(&self, n: u64) -> Result<()> {
        if n > self.limit {
            Err(Error::SieveLimit { limit: self.limit, required: n })
        } else {
            Ok(())
        }
    }

    /// Decompose `n` as `p^k` if it is a prime power.
    pub fn prime_power(&self, n: u64) -> Result<Option<PrimePower>> {
        self.check_range(n)?;
        if n < 2 {
            return Ok(None);
        }
        if self.is_prime(n)? {
            return Ok(Some(PrimePower { n, p: n, k: 1 }));
        }
        let mut k = 2;
        while (1u64 << k) <= n {
            let r = iroot(n, k);
            if r.pow(k) == n && self.is_prime(r)? {
                return Ok(Some(PrimePower { n, p: r, k }));
            }
            k += 1;
        }
        Ok(None)
    }

    /// Λ(n) = log p when n = p^k, else 0.
    pub fn von_mangoldt(&self, n: u64) -> Result<f64> {
        if n < 1 {
            return Err(Error::Domain("von Mangoldt function needs n >= 1".into()));
        }
        Ok(self.prime_power(n)?.map_or(0.0, |pp| pp.log_p()))
    }

    /// Selberg's smoothed weight Λ_u(n).
    pub fn lambda_u(&self, n: u64, u: f64) -> Result<f64> {
        if n < 1 {
            return Err(Error::Domain("Λ_u(n) needs n >= 1".into()));
        }
        check_u(u)?;
        if (n as f64) > u * u {
            return Ok(0.0);
        }
        Ok(taper(n, u) * self.von_mangoldt(n)?)
    }

    /// All prime powers `p^k <= x`, ordered by `p` then `k`.
    pub fn prime_powers_up_to(&self, x: u64) -> Result<Vec<PrimePower>> {
        self.check_range(x)?;
        let mut out = Vec::with_capacity(self.count_up_to(x) + 64);
        for &p in &self.primes {
            let p = p as u64;
            if p > x {
                break;
            }
            let mut n = p;
            let mut k = 1;
            loop {
                out.push(PrimePower { n, p, k });
                match n.checked_mul(p) {
                    Some(m) if m <= x => {
                        n = m;
                        k += 1;
                    }
                    _ => break,
                }
            }
        }
        Ok(out)
    }

    /// Write the sieve as a bit array over odd numbers.
    pub fn save_cache(&self, path: &Path) -> Result<()> {
        let nbits = (self.limit / 2 + 1) as usize;
        let mut bits = vec![0u8; nbits.div_ceil(8)];
        for &p in self.primes.iter().skip(1) {
            let j = (p / 2) as usize;
            bits[j / 8] |= 1 << (j % 8);
        }
        let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        f.write_all(CACHE_MAGIC)
            .and_then(|_| f.write_all(&self.limit.to_le_bytes()))
            .and_then(|_| f.write_all(&bits))
            .map_err(|e| Error::io(path, e))
    }

    /// Read a cache written by [`save_cache`](Self::save_cache); `None` if
    /// the file is absent, malformed, or for another limit.
    pub fn load_cache(path: &Path, limit: u64) -> Option<PrimeTable> {
        let mut buf = Vec::new();
        fs::File::open(path).ok()?.read_to_end(&mut buf).ok()?;
        if buf.len() < 16 || &buf[..8] != CACHE_MAGIC {
            return None;
        }
        let stored = u64::from_le_bytes(buf[8..16].try_into().ok()?);
        if stored != limit || limit < 2 {
            return None;
        }
        let bits = &buf[16..];
        let nbits = (limit / 2 + 1) as usize;
        if bits.len() != nbits.div_ceil(8) {
            return None;
        }
        let mut primes = vec![2u32];
        for j in 1..nbits {
            if bits[j / 8] >> (j % 8) & 1 == 1 {
                let n = 2 * j as u64 + 1;
                if n <= limit {
                    primes.push(n as u32);
                }
            }
        }
        Some(PrimeTable { limit, primes })
    }

    /// Load the cached sieve at `path`, rebuilding (and rewriting) it when
    /// absent or built for a different limit.
    pub fn load_or_build(path: &Path, limit: u64) -> Result<PrimeTable> {
        if let Some(t) = Self::load_cache(path, limit) {
            return Ok(t);
        }
        let t = sieve(limit)?;
        t.save_cache(path)?;
        Ok(t)
    }
}

fn check_u(u: f64) -> Result<()> {
    if !(u > 1.0) || !u.is_finite() {
        return Err(Error::Domain(format!("smoothing height u must exceed 1, got {u}")));
    }
    Ok(())
}

/// The factor Λ_u(n)/Λ(n): 1 on [1, u], log(u²/n)/log u on [u, u²], else 0.
///
/// Dividing by log u (not log n) is what makes Selberg's identity for
/// ζ′/ζ exact.
pub fn taper(n: u64, u: f64) -> f64 {
    let x = n as f64;
    if x <= u {
        1.0
    } else if x <= u * u {
        (u * u / x).ln() / u.ln()
    } else {
        0.0
    }
}

/// Λ(n) by trial division, independent of any table.
pub fn von_mangoldt(n: u64) -> Result<f64> {
    if n < 1 {
        return Err(Error::Domain("von Mangoldt function needs n >= 1".into()));
    }
    if n == 1 {
        return Ok(0.0);
    }
    let mut m = n;
    let mut d = 2u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            while m.is_multiple_of(d) {
                m /= d;
            }
            return Ok(if m == 1 { (d as f64).ln() } else { 0.0 });
        }
        d += 1;
    }
    // n = m is prime
    Ok((n as f64).ln())
}

/// Λ_u(n) by trial division.
pub fn lambda_u(n: u64, u: f64) -> Result<f64> {
    check_u(u)?;
    Ok(von_mangoldt(n)? * taper(n, u))
}
