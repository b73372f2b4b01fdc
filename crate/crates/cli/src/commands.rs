use milnor::diagrams::{fission_of_residue, h3_basis, morita_milnor, tree_kontsevich};
use milnor::homflypt::{braid_closure, mu_via_homflypt_with, PdDiagram, SkeinEngine, DEFAULT_CACHE_LIMIT};
use milnor::magnus::{lcs_degree, mu_invariant, witt_ranks, LcsDegree};
use milnor::nilpotent::{milnor_residue, orr_coordinates};
use milnor::words::{commutator, longitudes, realize_last_longitude, BraidWord, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::report::{CliError, CliResult, Report};
use crate::{BraidArgs, Cli, Command, Via};

/// Environment variable holding the skein memo size per evaluation.
pub const CACHE_ENV: &str = "MUBAR_CACHE_LIMIT";

/// Longest index accepted by the HOMFLYPT route unless caps are lifted.
const MAX_HOMFLY_INDEX: usize = 5;

pub fn run(cli: &Cli) -> CliResult<Report> {
    match &cli.command {
        Command::Witt { q, max } => witt(*q, *max),
        Command::Longitudes { braid, cap } => longitudes_cmd(braid, *cap),
        Command::Mu {
            braid,
            index,
            via,
            heuristic,
        } => mu(braid, index, *via, (*heuristic).into(), cli.no_caps),
        Command::Orr { braid, k } => orr(braid, *k, cli.no_caps),
        Command::H3 { q, k } => h3(*q, *k, cli.no_caps),
        Command::KontsevichTree { braid, k } => kontsevich(braid, *k, cli.no_caps),
        Command::Homfly {
            braid,
            strands,
            pd,
            heuristic,
        } => homfly(braid.as_deref(), *strands, pd.as_deref(), (*heuristic).into()),
        Command::Crosscheck {
            seed,
            count,
            factors,
        } => crosscheck(*seed, *count, *factors),
    }
}

fn cache_limit() -> CliResult<usize> {
    match std::env::var(CACHE_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{CACHE_ENV} must be a nonnegative integer, got {s:?}"))),
        Err(_) => Ok(DEFAULT_CACHE_LIMIT),
    }
}

fn parse_braid(args: &BraidArgs) -> CliResult<BraidWord> {
    if args.strands == 0 {
        return Err(CliError::Usage("strand count must be at least 1".into()));
    }
    Ok(BraidWord::parse(&args.braid, args.strands)?)
}

/// `123` or `1,2,3`.
fn parse_index(s: &str) -> CliResult<Vec<usize>> {
    let bad = || CliError::Usage(format!("cannot read index sequence {s:?}"));
    let s = s.trim();
    if s.is_empty() {
        return Err(bad());
    }
    if s.contains(',') {
        s.split(',').map(|p| p.trim().parse().map_err(|_| bad())).collect()
    } else {
        s.chars()
            .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
            .collect()
    }
}

fn check_k(q: usize, k: usize, no_caps: bool) -> CliResult<()> {
    if k == 0 {
        return Err(CliError::Usage("k must be at least 1".into()));
    }
    let cap = if q <= 2 { 4 } else { 3 };
    if k > cap && !no_caps {
        return Err(CliError::Usage(format!(
            "k={k} exceeds the default cap {cap} for q={q}; pass --no-caps to lift it"
        )));
    }
    Ok(())
}

fn to_json<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("library types serialize to JSON")
}

fn braid_json(b: &BraidWord) -> Value {
    json!({ "word": b.to_string(), "strands": b.strands() })
}

fn witt(q: usize, max: usize) -> CliResult<Report> {
    let table = witt_ranks(q, max + 1)?;
    let ranks: Vec<usize> = table.ranks[..max].to_vec();
    let kernel: Vec<usize> = (1..=max).map(|h| q * table.n(h) - table.n(h + 1)).collect();
    let mut text = format!("{:>3} {:>10} {:>16}\n", "h", "N_h", "qN_h - N_{h+1}");
    for h in 1..=max {
        text += &format!("{h:>3} {:>10} {:>16}\n", ranks[h - 1], kernel[h - 1]);
    }
    text += &format!("N = {ranks:?}\n");
    Ok(Report::new(json!({ "q": q, "max": max, "N": ranks, "kernel_ranks": kernel })).with_text(text))
}

fn degree_json(d: LcsDegree) -> Value {
    match d {
        LcsDegree::Exact(v) => json!({ "degree": v, "exact": true }),
        LcsDegree::AtLeast(v) => json!({ "degree": v, "exact": false }),
    }
}

fn longitudes_cmd(args: &BraidArgs, cap: usize) -> CliResult<Report> {
    let b = parse_braid(args)?;
    let longs = longitudes(&b)?;
    let mut entries = Vec::new();
    let mut text = String::new();
    let mut min = cap;
    for (i, l) in longs.iter().enumerate() {
        let d = lcs_degree(l, cap);
        min = min.min(d.value());
        let shown = match d {
            LcsDegree::Exact(v) => v.to_string(),
            LcsDegree::AtLeast(v) => format!(">={v}"),
        };
        text += &format!("λ{} (degree {shown}, length {}): {l}\n", i + 1, l.len());
        entries.push(json!({
            "index": i + 1,
            "word": l.to_string(),
            "length": l.len(),
            "lcs": degree_json(d),
        }));
    }
    text += &format!("milnor degree: {min}\n");
    Ok(Report::new(json!({
        "braid": braid_json(&b),
        "longitudes": entries,
        "milnor_degree": min,
    }))
    .with_text(text))
}

fn mu(
    args: &BraidArgs,
    index: &str,
    via: Via,
    heuristic: milnor::homflypt::Heuristic,
    no_caps: bool,
) -> CliResult<Report> {
    let b = parse_braid(args)?;
    let idx = parse_index(index)?;
    let mut doc = json!({ "braid": braid_json(&b), "index": idx });
    let mut text = String::new();
    let mut magnus = None;
    if via != Via::Homflypt {
        let longs = longitudes(&b)?;
        let v = mu_invariant(&longs, &idx)?;
        text += &format!("magnus: {v}\n");
        doc["magnus"] = json!(v.to_string());
        magnus = Some(v);
    }
    let mut consistent = true;
    if via != Via::Magnus {
        if idx.len() > MAX_HOMFLY_INDEX && !no_caps {
            return Err(CliError::Usage(format!(
                "the HOMFLYPT route takes indices of length at most {MAX_HOMFLY_INDEX}; pass --no-caps to lift it"
            )));
        }
        let h = mu_via_homflypt_with(&b, &idx, heuristic, cache_limit()?)?;
        text += &format!("homflypt: {}\n", h.value);
        doc["homflypt"] = json!(h.value.to_string());
        doc["fusion_terms"] = to_json(&h.terms);
        if let Some(m) = magnus {
            let ok = m == h.value;
            text += if ok { "MATCH\n" } else { "MISMATCH\n" };
            doc["match"] = json!(ok);
            consistent = ok;
        }
    }
    Ok(Report::new(doc).with_text(text).with_consistency(consistent))
}

fn orr(args: &BraidArgs, k: usize, no_caps: bool) -> CliResult<Report> {
    let b = parse_braid(args)?;
    check_k(b.strands(), k, no_caps)?;
    let longs = longitudes(&b)?;
    let degree = longs
        .iter()
        .map(|l| lcs_degree(l, 2 * k + 1).value())
        .min()
        .unwrap_or(2 * k + 1);
    if degree < k {
        return Err(milnor::Error::Precondition(format!(
            "Milnor degree is {degree} (< {k}), so the longitudes do not all lie in F_{k}"
        ))
        .into());
    }
    let residue = milnor_residue(&longs, k, 2 * k)?;
    let coords = orr_coordinates(&longs, k)?;
    let trees = tree_kontsevich(&longs, k)?;
    let eta_ok = trees.eta(b.strands())?.sub(&residue.element).is_zero();
    let (h3, fission, consistent) = if k >= 2 {
        let m = morita_milnor(&longs, k)?;
        let f = fission_of_residue(&longs, k)?;
        let ok = m == f;
        (to_json(&m), to_json(&f), ok)
    } else {
        (Value::Null, Value::Null, true)
    };
    let doc = json!({
        "braid": braid_json(&b),
        "k": k,
        "milnor_degree": degree,
        "residue": to_json(&residue.element),
        "orr": to_json(&coords),
        "h3": h3,
        "fission_h3": fission,
        "consistent": consistent && eta_ok,
        "tree_kontsevich": to_json(&trees),
    });
    Ok(Report::new(doc).with_consistency(consistent && eta_ok))
}

fn h3(q: usize, k: usize, no_caps: bool) -> CliResult<Report> {
    if q == 0 {
        return Err(CliError::Usage("q must be at least 1".into()));
    }
    check_k(q, k, no_caps)?;
    let basis = h3_basis(q, k)?;
    let weights: serde_json::Map<String, Value> = (k + 1..2 * k)
        .map(|w| (w.to_string(), json!(basis.dim_in_weight(w))))
        .collect();
    let reps: Vec<String> = basis.representatives().iter().map(ToString::to_string).collect();
    let mut text = format!("dim H3 = {} ({})\n", basis.dim(), basis.basis_id);
    for (i, r) in reps.iter().enumerate() {
        text += &format!("e{}: {r}\n", i + 1);
    }
    let doc = json!({
        "q": q,
        "k": k,
        "basis_id": basis.basis_id,
        "dimension": basis.dim(),
        "weights": weights,
        "representatives": basis.representatives().iter().map(to_json).collect::<Vec<_>>(),
    });
    Ok(Report::new(doc).with_text(text))
}

fn kontsevich(args: &BraidArgs, k: usize, no_caps: bool) -> CliResult<Report> {
    let b = parse_braid(args)?;
    check_k(b.strands(), k, no_caps)?;
    let longs = longitudes(&b)?;
    let trees = tree_kontsevich(&longs, k)?;
    let residue = milnor_residue(&longs, k, 2 * k)?;
    let ok = trees.eta(b.strands())?.sub(&residue.element).is_zero();
    let doc = json!({
        "braid": braid_json(&b),
        "k": k,
        "trees": to_json(&trees),
        "eta_matches_residue": ok,
    });
    Ok(Report::new(doc)
        .with_text(format!("{trees}\n"))
        .with_consistency(ok))
}

fn homfly(
    braid: Option<&str>,
    strands: Option<usize>,
    pd: Option<&str>,
    heuristic: milnor::homflypt::Heuristic,
) -> CliResult<Report> {
    let (d, source) = match (pd, braid, strands) {
        (Some(text), _, _) => (PdDiagram::parse(text)?, json!({ "pd": text })),
        (None, Some(w), Some(n)) => {
            let b = parse_braid(&BraidArgs {
                braid: w.to_string(),
                strands: n,
            })?;
            (braid_closure(&b), json!({ "braid": braid_json(&b) }))
        }
        _ => return Err(CliError::Usage("give either --pd or both --braid and --strands".into())),
    };
    let mut engine = SkeinEngine::new(heuristic, cache_limit()?);
    let p = engine.evaluate(&d);
    let doc = json!({
        "source": source,
        "crossings": d.len(),
        "components": d.component_count(),
        "homfly": p.to_string(),
        "terms": to_json(&p),
    });
    Ok(Report::new(doc).with_text(format!("{p}\n")))
}

fn random_word<R: Rng>(rng: &mut R, rank: usize, len: usize) -> CliResult<Word> {
    let letters: Vec<i32> = (0..len)
        .map(|_| {
            let g = rng.gen_range(1..=rank as i32);
            if rng.gen_bool(0.5) {
                g
            } else {
                -g
            }
        })
        .collect();
    Ok(Word::from_signed(rank, &letters)?)
}

/// A random product of up to `factors` commutators of short words in `F_2`.
fn random_commutator_word<R: Rng>(rng: &mut R, factors: usize) -> CliResult<Word> {
    let mut w = Word::identity(2);
    for _ in 0..rng.gen_range(1..=factors.max(1)) {
        let len = rng.gen_range(1..=2);
        let a = random_word(rng, 2, len)?;
        let len = rng.gen_range(1..=2);
        let b = random_word(rng, 2, len)?;
        w = w.mul(&commutator(&a, &b)?);
    }
    Ok(w)
}

fn crosscheck(seed: u64, count: usize, factors: usize) -> CliResult<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let limit = cache_limit()?;
    let mut cases = Vec::with_capacity(count);
    let mut text = String::new();
    let mut all_ok = true;
    for i in 0..count {
        let w = random_commutator_word(&mut rng, factors)?;
        let b = realize_last_longitude(&w, 3)?;
        let longs = longitudes(&b)?;
        let magnus = mu_invariant(&longs, &[1, 2, 3])?;
        let h = mu_via_homflypt_with(&b, &[1, 2, 3], milnor::homflypt::Heuristic::Greedy, limit)?;
        let mu_ok = magnus == h.value;
        let m = morita_milnor(&longs, 2)?;
        let f = fission_of_residue(&longs, 2)?;
        let h3_ok = m == f;
        all_ok &= mu_ok && h3_ok;
        text += &format!(
            "{:>3} w={w} μ123: magnus {magnus} homflypt {} {} | H3 {}\n",
            i + 1,
            h.value,
            if mu_ok { "MATCH" } else { "MISMATCH" },
            if h3_ok { "MATCH" } else { "MISMATCH" },
        );
        cases.push(json!({
            "word": w.to_string(),
            "braid": braid_json(&b),
            "magnus": magnus.to_string(),
            "homflypt": h.value.to_string(),
            "mu_match": mu_ok,
            "morita_milnor": to_json(&m),
            "fission": to_json(&f),
            "h3_match": h3_ok,
        }));
    }
    text += &format!("{}\n", if all_ok { "ALL MATCH" } else { "MISMATCH FOUND" });
    let doc = json!({ "seed": seed, "count": count, "cases": cases, "all_match": all_ok });
    Ok(Report::new(doc).with_text(text).with_consistency(all_ok))
}
