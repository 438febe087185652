use interference_lab::ImpactClass;
use serde::{Deserialize, Serialize};
use spread_code_chain::EccParams;

use crate::OptimizerError;

/// Signal, noise and interference powers plus the occupied bandwidth.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkBudget {
    pub ps: f64,
    pub pn: f64,
    pub pi: f64,
    /// Bandwidth in Hz.
    pub bc: f64,
}

impl LinkBudget {
    /// Unit signal power with `Pn = 10^(-snr/10)` and `Pi = 10^(isr/10)`.
    pub fn from_db(snr_db: f64, isr_db: f64, bc: f64) -> Self {
        Self { ps: 1.0, pn: 10f64.powf(-snr_db / 10.0), pi: 10f64.powf(isr_db / 10.0), bc }
    }

    pub fn validate(&self) -> Result<(), OptimizerError> {
        let ok = self.ps > 0.0 && self.pn >= 0.0 && self.pi >= 0.0 && self.bc > 0.0;
        if !ok || ![self.ps, self.pn, self.pi, self.bc].iter().all(|v| v.is_finite()) {
            return Err(OptimizerError::Domain(format!("invalid link budget {self:?}")));
        }
        Ok(())
    }
}

/// Frame and code parameters the analytic chain depends on.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub n: usize,
    pub ncp: usize,
    pub nm: usize,
    pub np: usize,
    pub ecc: EccParams,
    /// Number of resolvable paths.
    pub l: usize,
}

impl Default for SystemParams {
    /// N = 992, Ncp = 69, QPSK, 544-bit packets, (17, 31, 7) code, three paths.
    fn default() -> Self {
        Self { n: 992, ncp: 69, nm: 4, np: 544, ecc: EccParams::rs31_17(), l: 3 }
    }
}

impl SystemParams {
    pub fn log2_nm(&self) -> f64 {
        (self.nm as f64).log2()
    }

    /// `M = N log2(Nm)`, chips per frame.
    pub fn chips_per_frame(&self) -> f64 {
        self.n as f64 * self.log2_nm()
    }

    /// Codewords per packet.
    pub fn g(&self) -> usize {
        self.np / self.ecc.ni
    }

    pub fn validate(&self) -> Result<(), OptimizerError> {
        self.ecc.validate()?;
        if self.n < 2 || self.ncp >= self.n || self.l == 0 || !(self.nm == 2 || self.nm == 4) {
            return Err(OptimizerError::Domain(format!("invalid system parameters {self:?}")));
        }
        if self.np == 0 || self.np % self.ecc.ni != 0 {
            return Err(OptimizerError::Domain(format!("Np = {} is not a multiple of Ni = {}", self.np, self.ecc.ni)));
        }
        Ok(())
    }
}

/// Everything the closed-form chain needs for one operating point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyticContext {
    pub sys: SystemParams,
    pub impact: ImpactClass,
    pub budget: LinkBudget,
}

impl AnalyticContext {
    pub fn new(sys: SystemParams, impact: ImpactClass, budget: LinkBudget) -> Result<Self, OptimizerError> {
        sys.validate()?;
        budget.validate()?;
        Ok(Self { sys, impact, budget })
    }

    fn scale(&self) -> f64 {
        self.sys.l as f64 * self.sys.log2_nm() / self.budget.ps
    }

    /// `gamma_in = L log2(Nm) (Pn + Pi) / Ps`.
    pub fn gamma_in(&self) -> f64 {
        self.scale() * (self.budget.pn + self.budget.pi)
    }

    /// `gamma_n = L log2(Nm) Pn / Ps`.
    pub fn gamma_n(&self) -> f64 {
        self.scale() * self.budget.pn
    }

    /// `gamma_i = N L log2(Nm) Pi / Ps`.
    pub fn gamma_i(&self) -> f64 {
        self.sys.n as f64 * self.scale() * self.budget.pi
    }

    /// `gamma_m = gamma_i + gamma_n Nd^2`.
    pub fn gamma_m(&self, nd: f64) -> f64 {
        self.gamma_i() + self.gamma_n() * nd * nd
    }

    /// Mixture weight `R = Nd / (N log2 Nm)`, clamped to `[0, 1]`.
    pub fn r(&self, nd: f64) -> f64 {
        (nd / self.sys.chips_per_frame()).clamp(0.0, 1.0)
    }

    /// Packet airtime per unit spreading length:
    /// `K = Np No (N + Ncp) / (N Ni Bc log2 Nm)`, so `T_p = K Nd`.
    pub fn k(&self) -> f64 {
        let s = &self.sys;
        (s.np * s.ecc.no * (s.n + s.ncp)) as f64 / (s.n as f64 * s.ecc.ni as f64 * self.budget.bc * s.log2_nm())
    }

    /// SINR scale that sets the optimizer's initial bracket.
    pub fn bracket_gamma(&self) -> f64 {
        match self.impact {
            ImpactClass::Stationary => self.gamma_in(),
            ImpactClass::NonStationary => self.gamma_n(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn airtime_constant_of_default_system() {
        // Bc = 992 x 15 kHz
        let ctx = AnalyticContext::new(
            SystemParams::default(),
            ImpactClass::Stationary,
            LinkBudget::from_db(-10.0, 8.0, 992.0 * 15e3),
        )
        .unwrap();
        let k = 544.0 * 31.0 * 1061.0 / (992.0 * 17.0 * 14.88e6 * 2.0);
        assert!((ctx.k() / k - 1.0).abs() < 1e-14);
        // error-free airtime limit at Nd = 16
        assert!((1.0 / (16.0 * ctx.k()) - 1753.06).abs() < 0.01);
    }

    #[test]
    fn gammas() {
        let sys = SystemParams { n: 256, ncp: 16, nm: 2, np: 34, ecc: EccParams::rs31_17(), l: 2 };
        let ctx = AnalyticContext::new(sys, ImpactClass::NonStationary, LinkBudget { ps: 2.0, pn: 0.5, pi: 4.0, bc: 1.0 }).unwrap();
        assert_eq!(ctx.gamma_n(), 0.5);
        assert_eq!(ctx.gamma_in(), 4.5);
        assert_eq!(ctx.gamma_i(), 1024.0);
        assert_eq!(ctx.gamma_m(2.0), 1026.0);
        assert_eq!(ctx.r(512.0), 1.0);
        assert_eq!(ctx.bracket_gamma(), 0.5);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(LinkBudget { ps: 0.0, pn: 1.0, pi: 0.0, bc: 1.0 }.validate().is_err());
        assert!(LinkBudget { ps: 1.0, pn: -1.0, pi: 0.0, bc: 1.0 }.validate().is_err());
        let bad = SystemParams { np: 100, ..SystemParams::default() };
        assert!(bad.validate().is_err());
    }
}
