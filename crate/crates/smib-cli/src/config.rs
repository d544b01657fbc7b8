use smib_core::params::MachineParams;

/// Line-oriented sectioned `key = value` configuration. An empty file yields
/// the default machine data and tuning; unknown sections/keys are rejected
/// with the offending line number.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub machine: MachineParams,
    pub lqg_rho: f64,
    pub lqg_q: f64,
    pub nflc_lambda_g: f64,
    pub nflc_lambda_t: f64,
    pub inflc_lambda: f64,
    pub inflc_a: f64,
    pub t_end: f64,
    pub dt_cdm: f64,
    pub dt_plant: f64,
    pub w_min: f64,
    pub w_max: f64,
    pub points: usize,
    pub out_dir: String,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            machine: MachineParams::default(),
            lqg_rho: 1.0,
            lqg_q: 9.0005,
            nflc_lambda_g: 1.0,
            nflc_lambda_t: 1.0,
            inflc_lambda: 1.3,
            inflc_a: 0.3,
            t_end: 100.0,
            dt_cdm: 0.01,
            dt_plant: 2e-3,
            w_min: 1e-3,
            w_max: 1e3,
            points: 2000,
            out_dir: "out".to_string(),
        }
    }
}

#[derive(Debug)]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.line > 0 {
            write!(f, "line {}: {}", self.line, self.message)
        } else {
            write!(f, "{}", self.message)
        }
    }
}

fn err(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError { line, message: message.into() }
}

fn parse_f64(line: usize, key: &str, v: &str) -> Result<f64, ConfigError> {
    let x: f64 = v
        .parse()
        .map_err(|_| err(line, format!("{key}: not a number: {v:?}")))?;
    if !x.is_finite() {
        return Err(err(line, format!("{key}: value must be finite")));
    }
    Ok(x)
}

fn require_positive(line: usize, key: &str, x: f64) -> Result<f64, ConfigError> {
    if x <= 0.0 {
        return Err(err(line, format!("{key}: must be positive, got {x}")));
    }
    Ok(x)
}

impl Config {
    pub fn parse(text: &str) -> Result<Config, ConfigError> {
        let mut cfg = Config::default();
        let mut section = String::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let s = match raw.find(['#', ';']) {
                Some(p) => &raw[..p],
                None => raw,
            }
            .trim();
            if s.is_empty() {
                continue;
            }
            if let Some(name) = s.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| err(line, "unterminated section header"))?
                    .trim();
                match name {
                    "machine" | "controller.lqg" | "controller.nflc" | "controller.inflc"
                    | "scenario" | "freq" | "output" => section = name.to_string(),
                    _ => return Err(err(line, format!("unknown section [{name}]"))),
                }
                continue;
            }
            let (key, value) = s
                .split_once('=')
                .ok_or_else(|| err(line, "expected `key = value`"))?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() || value.is_empty() {
                return Err(err(line, "expected `key = value`"));
            }
            cfg.set(line, &section, key, value)?;
        }
        cfg.check(0)?;
        Ok(cfg)
    }

    fn set(&mut self, line: usize, section: &str, key: &str, v: &str) -> Result<(), ConfigError> {
        match section {
            "machine" => {
                let x = parse_f64(line, key, v)?;
                let m = &mut self.machine;
                // positivity is enforced globally in check(); D and alpha may
                // be zero/any sign
                match key {
                    "L_d" => m.l_d = x,
                    "L_F" => m.l_f = x,
                    "L_D" => m.l_dd = x,
                    "L_q" => m.l_q = x,
                    "L_Q" => m.l_qq = x,
                    "kM_F" => m.km_f = x,
                    "kM_D" => m.km_d = x,
                    "M_R" => m.m_r = x,
                    "kM_Q" => m.km_q = x,
                    "R" => m.r = x,
                    "R_F" => m.r_f = x,
                    "R_D" => m.r_dd = x,
                    "R_Q" => m.r_qq = x,
                    "H" => m.h = require_positive(line, "H", x)?,
                    "R_e" => m.r_e = x,
                    "L_e" => m.l_e = x,
                    "D" => m.d = x,
                    "K_T" => m.k_t = x,
                    "K_G" => m.k_g = x,
                    "tau_T" => m.tau_t = x,
                    "tau_G" => m.tau_g = x,
                    "R_T" => m.r_t = x,
                    "V_inf" => m.v_inf = x,
                    "alpha_deg" => m.alpha = x.to_radians(),
                    "omega_R" => m.omega_r = x,
                    "omega_base" => m.omega_base = x,
                    _ => return Err(err(line, format!("unknown key {key} in [machine]"))),
                }
            }
            "controller.lqg" => match key {
                "rho" => self.lqg_rho = require_positive(line, "rho", parse_f64(line, key, v)?)?,
                "q" => {
                    let x = parse_f64(line, key, v)?;
                    if x < 0.0 {
                        return Err(err(line, "q: must be non-negative"));
                    }
                    self.lqg_q = x;
                }
                _ => return Err(err(line, format!("unknown key {key} in [controller.lqg]"))),
            },
            "controller.nflc" => match key {
                "lambda_g" => {
                    self.nflc_lambda_g =
                        require_positive(line, "lambda_g", parse_f64(line, key, v)?)?
                }
                "lambda_t" => {
                    self.nflc_lambda_t =
                        require_positive(line, "lambda_t", parse_f64(line, key, v)?)?
                }
                _ => return Err(err(line, format!("unknown key {key} in [controller.nflc]"))),
            },
            "controller.inflc" => match key {
                "lambda" => {
                    self.inflc_lambda = require_positive(line, "lambda", parse_f64(line, key, v)?)?
                }
                "a" => {
                    let x = parse_f64(line, key, v)?;
                    if x < 0.0 {
                        return Err(err(line, "a: must be non-negative"));
                    }
                    self.inflc_a = x;
                }
                _ => return Err(err(line, format!("unknown key {key} in [controller.inflc]"))),
            },
            "scenario" => match key {
                "t_end" => self.t_end = require_positive(line, "t_end", parse_f64(line, key, v)?)?,
                "dt_cdm" => {
                    self.dt_cdm = require_positive(line, "dt_cdm", parse_f64(line, key, v)?)?
                }
                "dt_plant" => {
                    self.dt_plant = require_positive(line, "dt_plant", parse_f64(line, key, v)?)?
                }
                _ => return Err(err(line, format!("unknown key {key} in [scenario]"))),
            },
            "freq" => match key {
                "w_min" => self.w_min = require_positive(line, "w_min", parse_f64(line, key, v)?)?,
                "w_max" => self.w_max = require_positive(line, "w_max", parse_f64(line, key, v)?)?,
                "points" => {
                    self.points = v
                        .parse()
                        .map_err(|_| err(line, format!("points: not an integer: {v:?}")))?;
                    if self.points < 2 {
                        return Err(err(line, "points: must be at least 2"));
                    }
                }
                _ => return Err(err(line, format!("unknown key {key} in [freq]"))),
            },
            "output" => match key {
                "dir" => self.out_dir = v.to_string(),
                _ => return Err(err(line, format!("unknown key {key} in [output]"))),
            },
            "" => return Err(err(line, "key outside any section")),
            _ => unreachable!(),
        }
        Ok(())
    }

    fn check(&self, line: usize) -> Result<(), ConfigError> {
        self.machine
            .validate()
            .map_err(|e| err(line, format!("machine parameters: {e:?}")))?;
        if self.w_max <= self.w_min {
            return Err(err(line, "freq: w_max must exceed w_min"));
        }
        Ok(())
    }

    /// Canonical serialization; `parse(serialize(c)) == c`.
    pub fn serialize(&self) -> String {
        let m = &self.machine;
        let mut s = String::new();
        s.push_str("[machine]\n");
        for (k, v) in [
            ("L_d", m.l_d),
            ("L_F", m.l_f),
            ("L_D", m.l_dd),
            ("L_q", m.l_q),
            ("L_Q", m.l_qq),
            ("kM_F", m.km_f),
            ("kM_D", m.km_d),
            ("M_R", m.m_r),
            ("kM_Q", m.km_q),
            ("R", m.r),
            ("R_F", m.r_f),
            ("R_D", m.r_dd),
            ("R_Q", m.r_qq),
            ("H", m.h),
            ("R_e", m.r_e),
            ("L_e", m.l_e),
            ("D", m.d),
            ("K_T", m.k_t),
            ("K_G", m.k_g),
            ("tau_T", m.tau_t),
            ("tau_G", m.tau_g),
            ("R_T", m.r_t),
            ("V_inf", m.v_inf),
            ("alpha_deg", m.alpha.to_degrees()),
            ("omega_R", m.omega_r),
            ("omega_base", m.omega_base),
        ] {
            s.push_str(&format!("{k} = {v:.17e}\n"));
        }
        s.push_str("\n[controller.lqg]\n");
        s.push_str(&format!("rho = {:.17e}\nq = {:.17e}\n", self.lqg_rho, self.lqg_q));
        s.push_str("\n[controller.nflc]\n");
        s.push_str(&format!(
            "lambda_g = {:.17e}\nlambda_t = {:.17e}\n",
            self.nflc_lambda_g, self.nflc_lambda_t
        ));
        s.push_str("\n[controller.inflc]\n");
        s.push_str(&format!("lambda = {:.17e}\na = {:.17e}\n", self.inflc_lambda, self.inflc_a));
        s.push_str("\n[scenario]\n");
        s.push_str(&format!(
            "t_end = {:.17e}\ndt_cdm = {:.17e}\ndt_plant = {:.17e}\n",
            self.t_end, self.dt_cdm, self.dt_plant
        ));
        s.push_str("\n[freq]\n");
        s.push_str(&format!(
            "w_min = {:.17e}\nw_max = {:.17e}\npoints = {}\n",
            self.w_min, self.w_max, self.points
        ));
        s.push_str("\n[output]\n");
        s.push_str(&format!("dir = {}\n", self.out_dir));
        s
    }

    /// FNV-1a hash of the canonical serialization.
    pub fn hash(&self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        for b in self.serialize().bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        h
    }
}
