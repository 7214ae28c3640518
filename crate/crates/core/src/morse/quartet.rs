use crate::basis::GtoPrimitive;
use crate::error::Result;
use crate::one_body::GaussianPairData;
use crate::potential::MorseParams;

use super::rtensor::{RTableQ0, RTensorGeneral};

/// `<ab|U|cd>` with `a, c` on particle 1 and `b, d` on particle 2:
/// `sum E^{ac}_{tuv} E^{bd}_{t'u'v'} (-1)^{t'+u'+v'} R^{t+t', u+u', v+v'}(P - Q)`
/// times the four normalizations.
pub fn two_particle_integral(
    a: &GtoPrimitive,
    b: &GtoPrimitive,
    c: &GtoPrimitive,
    d: &GtoPrimitive,
    morse: &MorseParams,
) -> Result<f64> {
    if morse.de == 0.0 {
        return Ok(0.0);
    }
    let pair1 = GaussianPairData::new(a, c, 0);
    let pair2 = GaussianPairData::new(b, d, 0);
    let r: [f64; 3] = std::array::from_fn(|ax| pair1.center[ax] - pair2.center[ax]);
    let l1: [usize; 3] = std::array::from_fn(|ax| (a.powers[ax] + c.powers[ax]) as usize);
    let l2: [usize; 3] = std::array::from_fn(|ax| (b.powers[ax] + d.powers[ax]) as usize);
    let lmax = (l1.iter().sum::<usize>() + l2.iter().sum::<usize>()) as u32;

    let lookup: Box<dyn Fn(usize, usize, usize) -> Result<f64>> = if r == [0.0; 3] {
        let tab = RTableQ0::new(lmax, pair1.p, pair2.p, morse)?;
        Box::new(move |t, u, v| Ok(tab.get(t, u, v)))
    } else {
        let gen = RTensorGeneral::new(pair1.p, pair2.p, r, lmax, morse)?;
        Box::new(move |t, u, v| gen.get(t as u32, u as u32, v as u32))
    };

    let e1 = |ax: usize, t: usize| pair1.e[ax].get(a.powers[ax] as usize, c.powers[ax] as usize, t);
    let e2 = |ax: usize, t: usize| pair2.e[ax].get(b.powers[ax] as usize, d.powers[ax] as usize, t);
    let mut sum = 0.0;
    for t in 0..=l1[0] {
        let ex = e1(0, t);
        if ex == 0.0 {
            continue;
        }
        for u in 0..=l1[1] {
            let exy = ex * e1(1, u);
            if exy == 0.0 {
                continue;
            }
            for v in 0..=l1[2] {
                let c1 = exy * e1(2, v);
                if c1 == 0.0 {
                    continue;
                }
                for t2 in 0..=l2[0] {
                    let fx = e2(0, t2);
                    if fx == 0.0 {
                        continue;
                    }
                    for u2 in 0..=l2[1] {
                        let fxy = fx * e2(1, u2);
                        if fxy == 0.0 {
                            continue;
                        }
                        for v2 in 0..=l2[2] {
                            let c2 = fxy * e2(2, v2);
                            if c2 == 0.0 {
                                continue;
                            }
                            let sign = if (t2 + u2 + v2) % 2 == 0 { 1.0 } else { -1.0 };
                            sum += c1 * c2 * sign * lookup(t + t2, u + u2, v + v2)?;
                        }
                    }
                }
            }
        }
    }
    Ok(a.norm * b.norm * c.norm * d.norm * sum)
}
