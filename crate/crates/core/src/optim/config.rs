use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimizerKind {
    AdamPlus,
    NadamPlus,
    Sgd,
    MomentumSgd,
    Adagrad,
    Adam,
}

impl OptimizerKind {
    /// Adam⁺ and Nadam⁺, the kinds stepped by [`adamplus_step`](super::adamplus_step).
    pub fn is_adamplus_family(self) -> bool {
        matches!(self, OptimizerKind::AdamPlus | OptimizerKind::NadamPlus)
    }
}

/// Hyperparameters for every optimizer kind.
///
/// `alpha` is the step-size scale for the Adam⁺ family and the learning rate
/// for the baselines. `beta`, `a`, `p` and `eps0` only affect the Adam⁺
/// family; the remaining fields only affect their named baseline.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerConfig {
    pub kind: OptimizerKind,
    pub alpha: f64,
    pub beta: f64,
    pub a: f64,
    pub p: f64,
    pub eps0: f64,
    pub momentum: f64,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_eps: f64,
    pub adagrad_eps: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig::adam_plus()
    }
}

impl OptimizerConfig {
    /// Adam⁺ with α = 0.1, β = 0.1, a = 1, ε₀ = 1e-8.
    pub fn adam_plus() -> Self {
        OptimizerConfig {
            kind: OptimizerKind::AdamPlus,
            alpha: 0.1,
            beta: 0.1,
            a: 1.0,
            p: 0.5,
            eps0: 1e-8,
            momentum: 0.9,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_eps: 1e-8,
            adagrad_eps: 1e-10,
        }
    }

    pub fn nadam_plus(p: f64, a: f64) -> Self {
        OptimizerConfig {
            kind: OptimizerKind::NadamPlus,
            p,
            a,
            ..Self::adam_plus()
        }
    }

    /// Nadam⁺ at p = 1, a = 5/4, which is close to NIGT.
    pub fn nigt_style(alpha: f64, beta: f64) -> Self {
        OptimizerConfig {
            alpha,
            beta,
            ..Self::nadam_plus(1.0, 1.25)
        }
    }

    /// Adam⁺ with a = 1 and ε₀ = βᵃ, the setting of the data-dependent bound.
    pub fn theorem1(alpha: f64, beta: f64) -> Self {
        OptimizerConfig {
            alpha,
            beta,
            a: 1.0,
            eps0: beta,
            ..Self::adam_plus()
        }
    }

    /// Nadam⁺ with p = 2/3, a = 4/3 and ε₀ = 2β^{4/3}.
    pub fn theorem3(alpha: f64, beta: f64) -> Self {
        OptimizerConfig {
            alpha,
            beta,
            eps0: 2.0 * beta.powf(4.0 / 3.0),
            ..Self::nadam_plus(2.0 / 3.0, 4.0 / 3.0)
        }
    }

    /// Adam⁺ (p = 1/2) with a = 4/3 and ε₀ = 2β^{4/3}.
    pub fn appendix_e(alpha: f64, beta: f64) -> Self {
        OptimizerConfig {
            alpha,
            beta,
            a: 4.0 / 3.0,
            eps0: 2.0 * beta.powf(4.0 / 3.0),
            ..Self::adam_plus()
        }
    }

    pub fn sgd(lr: f64) -> Self {
        OptimizerConfig {
            kind: OptimizerKind::Sgd,
            alpha: lr,
            ..Self::adam_plus()
        }
    }

    pub fn momentum_sgd(lr: f64, momentum: f64) -> Self {
        OptimizerConfig {
            kind: OptimizerKind::MomentumSgd,
            alpha: lr,
            momentum,
            ..Self::adam_plus()
        }
    }

    pub fn adagrad(lr: f64) -> Self {
        OptimizerConfig {
            kind: OptimizerKind::Adagrad,
            alpha: lr,
            ..Self::adam_plus()
        }
    }

    /// Adam with β₁ = 0.9, β₂ = 0.999, ε = 1e-8.
    pub fn adam(lr: f64) -> Self {
        OptimizerConfig {
            kind: OptimizerKind::Adam,
            alpha: lr,
            ..Self::adam_plus()
        }
    }

    pub fn validate(&self) -> Result<()> {
        fn check(ok: bool, name: &'static str, reason: String) -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(Error::invalid(name, reason))
            }
        }
        check(
            self.alpha > 0.0 && self.alpha.is_finite(),
            "alpha",
            format!("must be positive, got {}", self.alpha),
        )?;
        if self.kind.is_adamplus_family() {
            check(
                self.beta > 0.0 && self.beta <= 1.0,
                "beta",
                format!("must lie in (0, 1], got {}", self.beta),
            )?;
            check(self.a >= 1.0, "a", format!("must be >= 1, got {}", self.a))?;
            check(
                (0.5..=1.0).contains(&self.p),
                "p",
                format!("must lie in [1/2, 1], got {}", self.p),
            )?;
            check(
                self.eps0 >= 0.0 && self.eps0.is_finite(),
                "eps0",
                format!("must be non-negative, got {}", self.eps0),
            )?;
            check(
                self.kind != OptimizerKind::AdamPlus || self.p == 0.5,
                "p",
                format!("Adam+ fixes p = 1/2, got {}", self.p),
            )?;
        }
        match self.kind {
            OptimizerKind::MomentumSgd => check(
                (0.0..1.0).contains(&self.momentum),
                "momentum",
                format!("must lie in [0, 1), got {}", self.momentum),
            ),
            OptimizerKind::Adam => {
                check(
                    (0.0..1.0).contains(&self.adam_beta1),
                    "adam_beta1",
                    format!("must lie in [0, 1), got {}", self.adam_beta1),
                )?;
                check(
                    (0.0..1.0).contains(&self.adam_beta2),
                    "adam_beta2",
                    format!("must lie in [0, 1), got {}", self.adam_beta2),
                )?;
                check(
                    self.adam_eps > 0.0,
                    "adam_eps",
                    format!("must be positive, got {}", self.adam_eps),
                )
            }
            OptimizerKind::Adagrad => check(
                self.adagrad_eps > 0.0,
                "adagrad_eps",
                format!("must be positive, got {}", self.adagrad_eps),
            ),
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        for cfg in [
            OptimizerConfig::adam_plus(),
            OptimizerConfig::nadam_plus(2.0 / 3.0, 4.0 / 3.0),
            OptimizerConfig::nigt_style(0.1, 0.1),
            OptimizerConfig::theorem1(0.25, 0.1),
            OptimizerConfig::theorem3(1.0, 0.1),
            OptimizerConfig::appendix_e(1.0, 0.1),
            OptimizerConfig::sgd(0.1),
            OptimizerConfig::momentum_sgd(0.1, 0.9),
            OptimizerConfig::adagrad(0.01),
            OptimizerConfig::adam(1e-3),
        ] {
            cfg.validate().unwrap();
        }
    }

    #[test]
    fn rejects_out_of_range() {
        let bad = [
            OptimizerConfig {
                alpha: 0.0,
                ..OptimizerConfig::adam_plus()
            },
            OptimizerConfig {
                beta: 0.0,
                ..OptimizerConfig::adam_plus()
            },
            OptimizerConfig {
                beta: 1.5,
                ..OptimizerConfig::adam_plus()
            },
            OptimizerConfig {
                a: 0.5,
                ..OptimizerConfig::adam_plus()
            },
            OptimizerConfig {
                eps0: -1.0,
                ..OptimizerConfig::adam_plus()
            },
            OptimizerConfig {
                p: 2.0 / 3.0,
                ..OptimizerConfig::adam_plus()
            },
            OptimizerConfig::nadam_plus(0.4, 1.0),
            OptimizerConfig::momentum_sgd(0.1, 1.0),
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err(), "{cfg:?} should be rejected");
        }
    }

    #[test]
    fn theorem3_floor() {
        let cfg = OptimizerConfig::theorem3(1.0, 0.1);
        assert!((cfg.eps0 - 0.092_831_776_672_255_6).abs() < 1e-12);
    }

    #[test]
    fn serde_rejects_unknown_keys() {
        let err = serde_json::from_str::<OptimizerConfig>(r#"{"kind":"adam_plus","alhpa":0.1}"#);
        assert!(err.is_err());
        let ok: OptimizerConfig = serde_json::from_str(r#"{"kind":"sgd","alpha":0.5}"#).unwrap();
        assert_eq!(ok, OptimizerConfig::sgd(0.5));
    }
}
