//! File formats: plot-ready CSV tables, JSON reports, and the plain-text
//! coin state file.
//!
//! CSV numbers carry 17 significant digits so downstream fits are never
//! quantization-limited; identical inputs produce byte-identical files.

use std::io::Write;

use num_complex::Complex64;

use crate::entanglement::SiteEntanglement;
use crate::error::{Error, Result};
use crate::lab::{FitResult, QTimeSeries, SweepPoint, SweepReport};
use crate::walk::{basis_label, CoinState, WalkState};

/// Full double precision: one leading digit plus 16 decimals. Negative zero
/// is normalized so equal values always render identically.
pub fn fmt_f64(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

/// `site,probability` rows of a position distribution.
pub fn write_distribution_csv<W: Write>(w: &mut W, distribution: &[f64]) -> Result<()> {
    writeln!(w, "site,probability")?;
    for (site, p) in distribution.iter().enumerate() {
        writeln!(w, "{site},{}", fmt_f64(*p))?;
    }
    Ok(())
}

/// `coin_index,site,re,im` rows of the full amplitude tensor.
pub fn write_state_snapshot_csv<W: Write>(w: &mut W, state: &WalkState) -> Result<()> {
    writeln!(w, "coin_index,site,re,im")?;
    for c in 0..state.coin_dim() {
        for x in 0..state.lattice_size() {
            let amp = state.amplitude(c, x);
            writeln!(w, "{c},{x},{},{}", fmt_f64(amp.re), fmt_f64(amp.im))?;
        }
    }
    Ok(())
}

/// `t,c1_tilde,c2_tilde` rows, optionally followed by commented fit lines.
pub fn write_ctilde_csv<W: Write>(
    w: &mut W,
    rows: &[(usize, f64, f64)],
    fits: Option<(&FitResult, &FitResult)>,
) -> Result<()> {
    writeln!(w, "t,c1_tilde,c2_tilde")?;
    for (t, c1, c2) in rows {
        writeln!(w, "{t},{},{}", fmt_f64(*c1), fmt_f64(*c2))?;
    }
    if let Some((linear, quadratic)) = fits {
        writeln!(
            w,
            "# c1_tilde linear fit: a0={},a1={},residual_rms={}",
            fmt_f64(linear.coefficients[0]),
            fmt_f64(linear.coefficients[1]),
            fmt_f64(linear.residual_rms)
        )?;
        writeln!(
            w,
            "# c2_tilde quadratic fit: b0={},residual_rms={}",
            fmt_f64(quadratic.coefficients[0]),
            fmt_f64(quadratic.residual_rms)
        )?;
    }
    Ok(())
}

/// `site,weight,Q` rows; the Q field is empty on sites without support.
pub fn write_profile_csv<W: Write>(w: &mut W, profile: &[SiteEntanglement]) -> Result<()> {
    writeln!(w, "site,weight,Q")?;
    for entry in profile {
        match entry.q {
            Some(q) => writeln!(w, "{},{},{}", entry.site, fmt_f64(entry.weight), fmt_f64(q))?,
            None => writeln!(w, "{},{},", entry.site, fmt_f64(entry.weight))?,
        }
    }
    Ok(())
}

/// Wide table `t,q_site_<s>...` with empty cells where Q is undefined.
pub fn write_qtimeseries_csv<W: Write>(w: &mut W, series: &QTimeSeries) -> Result<()> {
    let header: Vec<String> = series.sites.iter().map(|s| format!("q_site_{s}")).collect();
    writeln!(w, "t,{}", header.join(","))?;
    for row in &series.rows {
        let cells: Vec<String> = row
            .q
            .iter()
            .map(|q| q.map(fmt_f64).unwrap_or_default())
            .collect();
        writeln!(w, "{},{}", row.t, cells.join(","))?;
    }
    Ok(())
}

/// Flat per-point sweep table:
/// `param,ic2_q1..ic2_qM,mean_direct,mean_integral,second_moment,variance`.
pub fn write_sweep_csv<W: Write>(w: &mut W, points: &[SweepPoint], num_coins: usize) -> Result<()> {
    let ic_cols: Vec<String> = (1..=num_coins).map(|q| format!("ic2_q{q}")).collect();
    writeln!(
        w,
        "param,{},mean_direct,mean_integral,second_moment,variance",
        ic_cols.join(",")
    )?;
    for p in points {
        let ic_cells: Vec<String> = p.ic_squared.iter().map(|v| fmt_f64(*v)).collect();
        writeln!(
            w,
            "{},{},{},{},{},{}",
            fmt_f64(p.param),
            ic_cells.join(","),
            fmt_f64(p.mean_direct),
            fmt_f64(p.mean_integral),
            fmt_f64(p.second_moment),
            fmt_f64(p.variance)
        )?;
    }
    Ok(())
}

pub fn write_sweep_json<W: Write>(w: &mut W, report: &SweepReport) -> Result<()> {
    serde_json::to_writer_pretty(&mut *w, report)
        .map_err(|e| Error::InvalidParam(format!("json serialization failed: {e}")))?;
    writeln!(w)?;
    Ok(())
}

pub fn write_fit_json<W: Write>(w: &mut W, fit: &FitResult) -> Result<()> {
    serde_json::to_writer_pretty(&mut *w, fit)
        .map_err(|e| Error::InvalidParam(format!("json serialization failed: {e}")))?;
    writeln!(w)?;
    Ok(())
}

/// Renders the plain-text state file: `coins=M`, then one
/// `<bitstring> <re> <im>` line per nonzero amplitude.
pub fn format_state_file(coin: &CoinState) -> String {
    let mut out = format!("coins={}\n", coin.num_coins());
    for (index, amp) in coin.amplitudes().iter().enumerate() {
        if amp.norm_sqr() > 0.0 {
            out.push_str(&format!(
                "{} {} {}\n",
                basis_label(index, coin.num_coins()),
                fmt_f64(amp.re),
                fmt_f64(amp.im)
            ));
        }
    }
    out
}

/// Parses the state file format written by [`format_state_file`].
///
/// Unlisted basis states are zero. The loader renormalizes only when the
/// squared norm is within [`NORM_TOL`](crate::walk::NORM_TOL) of 1 and errors otherwise.
pub fn parse_state_file(text: &str) -> Result<CoinState> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::StateFileParse {
        line: 1,
        msg: "empty file".into(),
    })?;
    let header = header.trim();
    let num_coins: usize = header
        .strip_prefix("coins=")
        .ok_or_else(|| Error::StateFileParse {
            line: 1,
            msg: format!("expected `coins=M`, got `{header}`"),
        })?
        .parse()
        .map_err(|e| Error::StateFileParse {
            line: 1,
            msg: format!("bad coin count: {e}"),
        })?;
    if num_coins < 1 {
        return Err(Error::StateFileParse {
            line: 1,
            msg: "need at least one coin".into(),
        });
    }
    let dim = 1usize << num_coins;
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    let mut seen = vec![false; dim];
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::StateFileParse {
                line: line_no,
                msg: format!("expected `<bitstring> <re> <im>`, got `{line}`"),
            });
        }
        if fields[0].len() != num_coins || !fields[0].bytes().all(|b| b == b'0' || b == b'1') {
            return Err(Error::StateFileParse {
                line: line_no,
                msg: format!("bad {num_coins}-bit basis label `{}`", fields[0]),
            });
        }
        let index = usize::from_str_radix(fields[0], 2).unwrap();
        if seen[index] {
            return Err(Error::StateFileParse {
                line: line_no,
                msg: format!("duplicate basis label `{}`", fields[0]),
            });
        }
        seen[index] = true;
        let re: f64 = fields[1].parse().map_err(|e| Error::StateFileParse {
            line: line_no,
            msg: format!("bad real part: {e}"),
        })?;
        let im: f64 = fields[2].parse().map_err(|e| Error::StateFileParse {
            line: line_no,
            msg: format!("bad imaginary part: {e}"),
        })?;
        amps[index] = Complex64::new(re, im);
    }
    CoinState::new(amps, num_coins)
}
