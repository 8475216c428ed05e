//! Signal specification files.
//!
//! One `key = value` per line; `#` starts a comment. Every key is optional.
//!
//! ```text
//! offset = 45
//! trend = 0
//! noise = 0.2            # uniform in [-0.2, 0.2]
//! seed = 7
//! component = 0.5 1.0 0.3          # frequency_hz amplitude phase_rad
//! component = 0.1 2.0              # phase defaults to 0
//! change = 2000: 2.5 1.0 0.3, 0.5 1.0 0
//! change = 4000: none
//! ```
//!
//! A `change` line replaces the whole component set from the given time on;
//! `none` leaves only offset, trend and noise. Change lines must be sorted by
//! time.

use nyquist_core::synth::ChangeEvent;
use nyquist_core::{Component, SignalSpec};

use crate::error::{Error, Result};

pub fn parse_spec(text: &str, origin: &str) -> Result<SignalSpec> {
    let mut spec = SignalSpec::default();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i as u64 + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::parse(origin, line_no, msg);
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(format!("expected `key = value`, found `{line}`")))?;
        let value = value.trim();
        let number = |v: &str| -> Result<f64> {
            v.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| err(format!("`{v}` is not a finite number")))
        };
        match key.trim() {
            "offset" => spec.offset = number(value)?,
            "trend" => spec.trend = number(value)?,
            "noise" => spec.noise_amplitude = number(value)?,
            "seed" => {
                spec.seed = value
                    .parse()
                    .map_err(|_| err(format!("seed `{value}` is not an unsigned integer")))?
            }
            "component" => spec.components.push(component(value, &err)?),
            "change" => {
                let (time, rest) = value
                    .split_once(':')
                    .ok_or_else(|| err("expected `change = <time>: <components>`".into()))?;
                let time = number(time.trim())?;
                let rest = rest.trim();
                let components = if rest == "none" {
                    Vec::new()
                } else {
                    rest.split(',')
                        .map(|c| component(c, &err))
                        .collect::<Result<_>>()?
                };
                if spec.change_events.last().is_some_and(|e| e.time > time) {
                    return Err(err("change lines must be sorted by time".into()));
                }
                spec.change_events.push(ChangeEvent { time, components });
            }
            other => return Err(err(format!("unknown key `{other}`"))),
        }
    }
    spec.validate()?;
    Ok(spec)
}

fn component(text: &str, err: &dyn Fn(String) -> Error) -> Result<Component> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    if !(2..=3).contains(&fields.len()) {
        return Err(err(format!(
            "component needs `frequency amplitude [phase]`, found `{}`",
            text.trim()
        )));
    }
    let mut v = [0.0; 3];
    for (slot, f) in v.iter_mut().zip(&fields) {
        *slot = f
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| err(format!("`{f}` is not a finite number")))?;
    }
    Ok(Component::new(v[0], v[1], v[2]))
}

pub fn format_spec(spec: &SignalSpec) -> String {
    let mut out = format!(
        "offset = {}\ntrend = {}\nnoise = {}\nseed = {}\n",
        spec.offset, spec.trend, spec.noise_amplitude, spec.seed
    );
    let fmt = |c: &Component| format!("{} {} {}", c.frequency, c.amplitude, c.phase);
    for c in &spec.components {
        out.push_str(&format!("component = {}\n", fmt(c)));
    }
    for e in &spec.change_events {
        let set = if e.components.is_empty() {
            "none".to_string()
        } else {
            e.components.iter().map(fmt).collect::<Vec<_>>().join(", ")
        };
        out.push_str(&format!("change = {}: {set}\n", e.time));
    }
    out
}
