//! One function per subcommand, each producing a [`Report`].

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use rayon::prelude::*;

use fibnorm::concat::{concat_digits, render_digits, ConcatStream, StringCounter};
use fibnorm::digitlab::{
    digit_counts, figure1_data, jacobson_count, matches_jacobson, phi_period, residue_counts,
    running_stats, upsilon, Digit, RunningStats,
};
use fibnorm::fibcore::{omega, omega_lcm_predict, pisano_direct, pisano_fast, PeriodDescriptor};
use fibnorm::render::{decimal, decimal_parts, percent};
use fibnorm::{Budget, Error, Incomplete};

use crate::report::{Report, Status};
use crate::Command;

pub fn dispatch(command: &Command, budget: &Budget) -> Report {
    let mut report = match command {
        Command::Pisano {
            range,
            direct,
            both,
            ..
        } => pisano(range, Mode::pick(*direct, *both), budget),
        Command::Table {
            id,
            bases,
            max_place,
            base,
            places,
        } => match id {
            1 => table1(budget),
            2 => table2(budget),
            4 => table4(budget),
            5 => table5(max_place.unwrap_or(4), budget),
            6 => table6(bases.as_deref(), *max_place, budget),
            7 => table7(*base, *places, budget),
            _ => invalid(
                "table",
                format!("no table {id}; choose 1, 2, 4, 5, 6 or 7 (table 3 is `omega 1..10000`)"),
            ),
        },
        Command::Omega { range } => omega_range(range, budget),
        Command::Phi { base, place } => phi(*base, *place, budget),
        Command::Freq { base, place } => freq(*base, *place, budget),
        Command::Upsilon { base, max_place } => upsilon_cmd(*base, *max_place, budget),
        Command::Residues { m } => residues(*m, budget),
        Command::Jacobson { x, y } => jacobson(*x, *y, budget),
        Command::Concat { base, t } => concat(*base, *t, budget),
        Command::Normality { base, k, t } => normality(*base, *k, *t, budget),
        Command::Figure1 { base, places } => figure1(*base, *places, budget),
    };
    report.meta("budget_per_scan", budget.limit());
    report.meta("steps_used", budget.steps_used());
    report
}

fn invalid(command: &str, message: String) -> Report {
    let mut r = Report::new(command, &[]);
    r.fail(Status::InvalidInput, message);
    r
}

/// Placeholder written into a cell whose value could not be computed.
fn gap(err: &Error) -> &'static str {
    Status::of(err).label()
}

/// Parses `a`, `a..b` or `a..=b`; both ends inclusive and at least 1.
pub fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let num = |t: &str| {
        t.trim()
            .parse::<u64>()
            .map_err(|_| format!("`{t}` is not a nonnegative integer"))
    };
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let a = num(s)?;
            (a, a)
        }
    };
    if a == 0 {
        return Err("moduli start at 1".into());
    }
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok((a, b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Fast,
    Direct,
    Both,
}

impl Mode {
    fn pick(direct: bool, both: bool) -> Mode {
        if both {
            Mode::Both
        } else if direct {
            Mode::Direct
        } else {
            Mode::Fast
        }
    }
}

type Period = Result<PeriodDescriptor, Error>;

fn pisano(range: &str, mode: Mode, budget: &Budget) -> Report {
    let (a, b) = match parse_range(range) {
        Ok(r) => r,
        Err(e) => return invalid("pisano", e),
    };
    let mut r = if mode == Mode::Both {
        Report::new("pisano", &["m", "direct", "fast", "agree"])
    } else {
        Report::new("pisano", &["m", "period", "method"])
    };
    r.param("range", format!("{a}..{b}"));
    r.param("mode", format!("{mode:?}").to_lowercase());
    let results: Vec<(u64, Option<Period>, Option<Period>)> = (a..=b)
        .into_par_iter()
        .map(|m| {
            let d = (mode != Mode::Fast).then(|| pisano_direct(m, budget));
            let f = (mode != Mode::Direct).then(|| pisano_fast(m, budget));
            (m, d, f)
        })
        .collect();
    for (m, d, f) in results {
        let cell = |p: &Period| match p {
            Ok(p) => p.period().to_string(),
            Err(e) => gap(e).to_string(),
        };
        for e in [&d, &f].into_iter().flatten().filter_map(|p| p.as_ref().err()) {
            r.fail(Status::of(e), format!("m = {m}: {e}"));
        }
        match (d, f) {
            (Some(d), Some(f)) => {
                let agree = match (&d, &f) {
                    (Ok(x), Ok(y)) => {
                        let same = x.period() == y.period();
                        if !same {
                            r.fail(
                                Status::CrossCheckFailed,
                                format!("m = {m}: direct {} but factored {}", x.period(), y.period()),
                            );
                        }
                        if same { "yes" } else { "no" }
                    }
                    _ => "unknown",
                };
                r.row([m.to_string(), cell(&d), cell(&f), agree.to_string()]);
            }
            (Some(p), None) | (None, Some(p)) => {
                let method = p.as_ref().map_or("", |p| p.method().as_str());
                r.row([m.to_string(), cell(&p), method.to_string()]);
            }
            (None, None) => unreachable!("at least one method runs"),
        }
    }
    r
}

fn table1(budget: &Budget) -> Report {
    let mut r = Report::new("table 1", &["m", "period"]);
    for m in 2..=20u64 {
        match pisano_direct(m, budget) {
            Ok(p) => r.row([m.to_string(), p.period().to_string()]),
            Err(e) => {
                r.row([m.to_string(), gap(&e).to_string()]);
                r.error(&e);
            }
        }
    }
    r
}

fn table2(budget: &Budget) -> Report {
    let mut r = Report::new("table 2", &["m", "period", "zeros"]);
    for m in 2..=20u64 {
        match omega(m, budget) {
            Ok(c) => r.row([m.to_string(), c.period.to_string(), c.zeros.to_string()]),
            Err(e) => {
                r.row([m.to_string(), gap(&e).to_string(), gap(&e).to_string()]);
                r.error(&e);
            }
        }
    }
    r
}

/// Each cell of the ω(lcm) table, checked against every coprime pair below 61.
fn table4(budget: &Budget) -> Report {
    const LIMIT: u64 = 60;
    let mut r = Report::new(
        "table 4",
        &["omega_m", "omega_n", "rule", "observed", "pairs", "agree"],
    );
    r.param("pairs", format!("coprime m n in 2..{LIMIT}"));
    let classes: Result<Vec<_>, Error> = (1..=LIMIT * LIMIT)
        .into_par_iter()
        .map(|m| omega(m, budget).map(|c| c.zeros))
        .collect();
    let w = match classes {
        Ok(w) => w,
        Err(e) => {
            r.error(&e);
            return r;
        }
    };
    let at = |m: u64| w[m as usize - 1];
    let levels = [1u64, 2, 4];
    for &wm in &levels {
        for &wn in &levels {
            let rule = match (wm, wn) {
                (1, 1) => "1",
                (4, 4) => "4",
                (1, 4) => "4 if m is 2 else 2",
                (4, 1) => "4 if n is 2 else 2",
                _ => "2",
            };
            let mut observed = Vec::new();
            let (mut pairs, mut agree) = (0u64, true);
            for m in 2..=LIMIT {
                for n in 2..=LIMIT {
                    if m.gcd(&n) != 1 || at(m).count() != wm || at(n).count() != wn {
                        continue;
                    }
                    let direct = at(m.lcm(&n));
                    pairs += 1;
                    agree &= omega_lcm_predict(at(m), at(n), m, n) == direct;
                    if !observed.contains(&direct.count()) {
                        observed.push(direct.count());
                    }
                }
            }
            observed.sort_unstable();
            let shown: Vec<String> = observed.iter().map(u64::to_string).collect();
            if !agree {
                r.fail(
                    Status::CrossCheckFailed,
                    format!("prediction fails for omega(m) = {wm} and omega(n) = {wn}"),
                );
            }
            r.row([
                wm.to_string(),
                wn.to_string(),
                rule.to_string(),
                shown.join(" "),
                pairs.to_string(),
                if agree { "yes" } else { "no" }.to_string(),
            ]);
        }
    }
    r
}

fn table5(max_place: u32, budget: &Budget) -> Report {
    let mut r = Report::new("table 5", &["place", "period", "sequence", "zeros", "ones"]);
    r.param("base", 2);
    r.param("max_place", max_place);
    for place in 0..=max_place {
        let row = phi_period(2, place, budget).and_then(|p| {
            budget.check(p.length())?;
            let digits: Vec<String> = p.digits().map(|d| d.to_string()).collect();
            let ones = digits.iter().filter(|d| *d == "1").count();
            Ok([
                place.to_string(),
                p.length().to_string(),
                digits.join(" "),
                (digits.len() - ones).to_string(),
                ones.to_string(),
            ])
        });
        match row {
            Ok(row) => r.row(row),
            Err(e) => {
                let g = gap(&e);
                r.row([place.to_string(), g.into(), g.into(), g.into(), g.into()]);
                r.error(&e);
            }
        }
    }
    r
}

/// Depth of the published search for each tabulated base.
fn default_depth(base: u32) -> u32 {
    match base {
        5 => 3,
        13 | 17 => 4,
        37 => 3,
        _ => 2,
    }
}

fn table6(bases: Option<&[u32]>, max_place: Option<u32>, budget: &Budget) -> Report {
    let bases = bases.unwrap_or(&[5, 13, 17, 37, 53, 61]);
    let mut r = Report::new("table 6", &["base", "upsilon", "searched_to", "uniform_places"]);
    r.param(
        "bases",
        bases.iter().map(u32::to_string).collect::<Vec<_>>().join(" "),
    );
    if let Some(p) = max_place {
        r.param("max_place", p);
    }
    let results: Vec<_> = bases
        .par_iter()
        .map(|&b| upsilon(b, max_place.unwrap_or_else(|| default_depth(b)), budget))
        .collect();
    for (&base, result) in bases.iter().zip(results) {
        let (res, err) = match result {
            Ok(res) => (res, None),
            Err(Incomplete { partial, cause }) => (partial, Some(cause)),
        };
        let flags: Vec<&str> = res.uniform.iter().map(|&u| if u { "1" } else { "0" }).collect();
        r.row([
            base.to_string(),
            res.value.map_or("none".into(), |v| v.to_string()),
            res.searched_to.map_or("none".into(), |v| v.to_string()),
            flags.join(" "),
        ]);
        if let Some(e) = err {
            r.fail(Status::of(&e), format!("base {base}: {e}"));
        }
    }
    r
}

fn table7(base: u32, places: u32, budget: &Budget) -> Report {
    let mut r = Report::new("table 7", &[]);
    r.param("base", base);
    r.param("places", places);
    let stats = match running_stats(base, places, budget) {
        Ok(s) => s,
        Err(Incomplete { partial, cause }) => {
            r.error(&cause);
            partial
        }
    };
    write_running(&mut r, base, &stats);
    r
}

fn write_running(r: &mut Report, base: u32, stats: &RunningStats) {
    let mut columns = vec!["place".to_string(), "length".to_string()];
    for prefix in ["count", "running", "percent", "exact_percent"] {
        columns.extend((0..base).map(|d| format!("{prefix}_{d}")));
    }
    r.columns = columns;
    for row in &stats.rows {
        let mut cells = vec![row.place.to_string(), row.length.to_string()];
        cells.extend(row.counts.iter().map(u64::to_string));
        cells.extend(row.cumulative.iter().map(u128::to_string));
        let total = row.cumulative_total();
        cells.extend(row.cumulative.iter().map(|&c| percent(c, total, 4)));
        cells.extend(row.percentages().iter().map(Ratio::to_string));
        r.row(cells);
    }
}

fn omega_range(range: &str, budget: &Budget) -> Report {
    let (a, b) = match parse_range(range) {
        Ok(r) => r,
        Err(e) => return invalid("omega", e),
    };
    let mut r = Report::new("omega", &["m", "period", "zeros"]);
    r.param("range", format!("{a}..{b}"));
    let results: Vec<_> = (a..=b).into_par_iter().map(|m| omega(m, budget)).collect();
    let mut census = [0u64; 5];
    for (m, res) in (a..=b).zip(results) {
        match res {
            Ok(c) => {
                census[c.zeros.count() as usize] += 1;
                r.row([m.to_string(), c.period.to_string(), c.zeros.to_string()]);
            }
            Err(e) => {
                r.row([m.to_string(), gap(&e).to_string(), gap(&e).to_string()]);
                r.fail(Status::of(&e), format!("m = {m}: {e}"));
            }
        }
    }
    for z in [1, 2, 4] {
        r.meta(&format!("zeros_{z}"), census[z]);
    }
    r
}

fn phi(base: u32, place: u32, budget: &Budget) -> Report {
    let mut r = Report::new("phi", &["n", "digit"]);
    r.param("base", base).param("place", place);
    let p = match phi_period(base, place, budget) {
        Ok(p) => p,
        Err(e) => {
            r.error(&e);
            return r;
        }
    };
    r.meta("length", p.length());
    if let Err(e) = budget.check(p.length()) {
        r.error(&e);
        return r;
    }
    for (n, d) in p.digits().enumerate() {
        r.row([n.to_string(), d.to_string()]);
    }
    r
}

fn freq(base: u32, place: u32, budget: &Budget) -> Report {
    let mut r = Report::new("freq", &["digit", "count", "share"]);
    r.param("base", base).param("place", place);
    match digit_counts(base, place, budget) {
        Ok(t) => {
            for (d, &c) in t.counts.iter().enumerate() {
                r.row([d.to_string(), c.to_string(), t.frequency(d as Digit).to_string()]);
            }
            r.meta("period", t.total);
            r.meta("uniform", t.is_uniform());
        }
        Err(e) => r.error(&e),
    }
    r
}

fn upsilon_cmd(base: u32, max_place: u32, budget: &Budget) -> Report {
    let mut r = Report::new("upsilon", &["place", "uniform"]);
    r.param("base", base).param("max_place", max_place);
    let res = match upsilon(base, max_place, budget) {
        Ok(res) => res,
        Err(Incomplete { partial, cause }) => {
            r.error(&cause);
            partial
        }
    };
    for (place, u) in res.uniform.iter().enumerate() {
        r.row([place.to_string(), u.to_string()]);
    }
    r.meta("upsilon", res.value.map_or("none".into(), |v| v.to_string()));
    r.meta("searched_to", res.searched_to.map_or("none".into(), |v| v.to_string()));
    r
}

fn residues(m: u64, budget: &Budget) -> Report {
    let mut r = Report::new("residues", &["z", "count"]);
    r.param("m", m);
    match residue_counts(m, budget) {
        Ok(t) => {
            for (z, c) in &t.counts {
                r.row([z.to_string(), c.to_string()]);
            }
            r.meta("period", t.period);
            r.meta("jacobson_pattern", matches_jacobson(&t));
        }
        Err(e) => r.error(&e),
    }
    r
}

fn jacobson(x: u32, y: u32, budget: &Budget) -> Report {
    let mut r = Report::new("jacobson", &["z", "count", "predicted"]);
    r.param("x", x).param("y", y);
    let m = 5u64
        .checked_pow(x)
        .and_then(|f| 2u64.checked_pow(y).and_then(|g| f.checked_mul(g)));
    let Some(m) = m else {
        r.fail(Status::InvalidInput, format!("5^{x} * 2^{y} exceeds 64 bits"));
        return r;
    };
    r.meta("modulus", m);
    match residue_counts(m, budget) {
        Ok(t) => {
            for z in 0..m {
                r.row([z.to_string(), t.v(z).to_string(), jacobson_count(z).to_string()]);
            }
            r.meta("period", t.period);
            r.meta("holds", matches_jacobson(&t));
        }
        Err(e) => r.error(&e),
    }
    r
}

fn concat(base: u32, t: u64, budget: &Budget) -> Report {
    let mut r = Report::new("concat", &["digits"]);
    r.param("base", base).param("t", t);
    match budget.check(t).and_then(|()| concat_digits(base, t)) {
        Ok(d) => r.row([render_digits(&d, base)]),
        Err(e) => r.error(&e),
    }
    r
}

/// Listing every string is capped at this many rows; beyond it only observed
/// strings are shown.
const FULL_LISTING: u128 = 4096;

fn normality(base: u32, k: usize, t: u64, budget: &Budget) -> Report {
    let mut r = Report::new("normality", &["string", "count", "frequency", "deviation"]);
    r.param("base", base).param("k", k).param("t", t);
    if (k as u64) > t {
        r.fail(Status::InvalidInput, format!("k = {k} exceeds t = {t}"));
        return r;
    }
    let counter = budget.check(t).and_then(|()| {
        let mut counter = StringCounter::new(base, k)?;
        for d in ConcatStream::new(base)?.take(t as usize) {
            counter.push(d);
        }
        Ok(counter)
    });
    let counter = match counter {
        Ok(c) => c,
        Err(e) => {
            r.error(&e);
            return r;
        }
    };
    let strings = BigUint::from(base).pow(k as u32);
    let listed: Vec<(Vec<Digit>, u64)> = if strings <= BigUint::from(FULL_LISTING) {
        let n = u64::try_from(&strings).expect("small");
        (0..n)
            .map(|code| {
                let mut s = vec![0; k];
                let mut c = code;
                for slot in s.iter_mut().rev() {
                    *slot = (c % base as u64) as Digit;
                    c /= base as u64;
                }
                let count = counter.count(&s).expect("valid pattern");
                (s, count)
            })
            .collect()
    } else {
        counter.observed()
    };
    let tt = BigUint::from(t);
    let denom = &tt * &strings;
    let mut worst = BigUint::from(0u32);
    for (s, c) in &listed {
        let scaled = BigUint::from(*c) * &strings;
        let diff = if scaled > tt { &scaled - &tt } else { &tt - &scaled };
        if diff > worst {
            worst = diff.clone();
        }
        r.row([
            render_digits(s, base),
            c.to_string(),
            decimal_parts(&BigUint::from(*c), &tt, 6),
            decimal_parts(&diff, &denom, 6),
        ]);
    }
    r.meta("windows", counter.windows());
    r.meta("expected", decimal_parts(&BigUint::from(1u32), &strings, 6));
    r.meta("max_deviation", decimal_parts(&worst, &denom, 6));
    r.meta(
        "listing",
        if strings <= BigUint::from(FULL_LISTING) { "all" } else { "observed" },
    );
    r
}

fn figure1(base: u32, places: u32, budget: &Budget) -> Report {
    let mut r = Report::new(
        "figure1",
        &["place", "digit", "cumulative_percent", "reference"],
    );
    r.param("base", base).param("places", places);
    let fig = match figure1_data(base, places, budget) {
        Ok(f) => f,
        Err(Incomplete { partial, cause }) => {
            r.error(&cause);
            partial
        }
    };
    let reference = decimal(&fig.reference, 6);
    for p in &fig.points {
        r.row([
            p.place.to_string(),
            p.digit.to_string(),
            decimal(&p.percent, 4),
            reference.clone(),
        ]);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("7"), Ok((7, 7)));
        assert_eq!(parse_range("2..20"), Ok((2, 20)));
        assert_eq!(parse_range("2..=20"), Ok((2, 20)));
        assert!(parse_range("0..3").is_err());
        assert!(parse_range("5..3").is_err());
        assert!(parse_range("x").is_err());
    }
}
