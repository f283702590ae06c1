//! Neumaier compensated summation.

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierComplex {
    re: Neumaier,
    im: Neumaier,
}

impl NeumaierComplex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

pub fn sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = Neumaier::new();
    for x in xs {
        acc.add(x);
    }
    acc.value()
}

pub fn sum_complex(zs: impl IntoIterator<Item = Complex64>) -> Complex64 {
    let mut acc = NeumaierComplex::new();
    for z in zs {
        acc.add(z);
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_small_terms() {
        let xs = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(sum(xs), 2.0);
    }

    #[test]
    fn complex_parts_are_independent() {
        let zs = [Complex64::new(1e16, 1.0), Complex64::new(1.0, 1e16), Complex64::new(-1e16, -1e16)];
        assert_eq!(sum_complex(zs), Complex64::new(1.0, 1.0));
    }
}
