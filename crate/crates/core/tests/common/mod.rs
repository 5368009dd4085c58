#![allow(dead_code)]
use ezr::data::{median, Cell, Dataset, GoalStats};
use ezr::explain::node_weighted_impurity;
use ezr::tree::Labeled;
use ezr::tree::{grow_tree, sd, TreeConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn data_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn fixture(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

/// Random CSV: `n_num` numeric and `n_sym` symbolic inputs, one goal per
/// entry of `maximize`. Input cells go missing with probability `missing`.
pub fn random_csv(seed: u64, rows: usize, n_num: usize, n_sym: usize, maximize: &[bool], missing: f64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut header: Vec<String> = (0..n_num).map(|i| format!("N{i}")).collect();
    header.extend((0..n_sym).map(|i| format!("s{i}")));
    header.extend(
        maximize
            .iter()
            .enumerate()
            .map(|(i, &m)| format!("G{i}{}", if m { '+' } else { '-' })),
    );
    let mut out = header.join(",") + "\n";
    for _ in 0..rows {
        let mut cells: Vec<String> = Vec::new();
        for _ in 0..n_num {
            cells.push(if rng.gen_bool(missing) {
                "?".into()
            } else {
                format!("{}", rng.gen_range(0..20))
            });
        }
        for _ in 0..n_sym {
            cells.push(if rng.gen_bool(missing) {
                "?".into()
            } else {
                ["a", "b", "c"][rng.gen_range(0..3)].into()
            });
        }
        for _ in maximize {
            cells.push(format!("{:.3}", rng.gen_range(-50.0..50.0)));
        }
        out += &(cells.join(",") + "\n");
    }
    out
}

pub fn random_data(seed: u64, rows: usize, n_num: usize, n_sym: usize, maximize: &[bool], missing: f64) -> Dataset {
    Dataset::load(random_csv(seed, rows, n_num, n_sym, maximize, missing).as_bytes()).unwrap()
}

/// One numeric input fully determines the single goal; `Noise*` columns
/// are independent of it and `Flat` never changes.
pub fn informative(seed: u64, rows: usize) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = String::from("Noise1,Signal,Noise2,Flat,Y-\n");
    for _ in 0..rows {
        let s: f64 = rng.gen_range(0.0..100.0);
        out += &format!(
            "{:.3},{:.3},{:.3},7,{:.3}\n",
            rng.gen_range(0.0..100.0),
            s,
            rng.gen_range(0.0..100.0),
            s
        );
    }
    Dataset::load(out.as_bytes()).unwrap()
}

/// Every row, labeled with its true distance.
pub fn all_labeled(d: &Dataset) -> Vec<Labeled> {
    (0..d.len())
        .map(|r| Labeled {
            row: r,
            d2h: d.distance(r, ezr::data::Metric::D2h).unwrap(),
        })
        .collect()
}

// Independent enumeration of every legal root split.
fn brute_force_min(d: &Dataset, rows: &[Labeled], min_leaf: usize) -> Option<f64> {
    let mut best: Option<f64> = None;
    for &f in &d.x {
        let present: Vec<&Labeled> = rows.iter().filter(|r| !d.rows[r.row].cells[f].is_missing()).collect();
        let mut tests: Vec<CellTest> = Vec::new();
        let mut nums: Vec<f64> = present.iter().filter_map(|r| d.rows[r.row].cells[f].as_num()).collect();
        nums.sort_by(f64::total_cmp);
        nums.dedup();
        for w in nums.windows(2) {
            let t = (w[0] + w[1]) / 2.0;
            tests.push(Box::new(move |c: &Cell| c.as_num().unwrap() <= t));
        }
        let mut syms: Vec<String> = present
            .iter()
            .filter_map(|r| match &d.rows[r.row].cells[f] {
                Cell::Sym(s) => Some(s.clone()),
                _ => None,
            })
            .collect();
        syms.sort();
        syms.dedup();
        for s in syms {
            tests.push(Box::new(move |c: &Cell| matches!(c, Cell::Sym(x) if *x == s)));
        }
        for t in tests {
            let (l, r): (Vec<f64>, Vec<f64>) = {
                let mut l = Vec::new();
                let mut r = Vec::new();
                for row in &present {
                    if t(&d.rows[row.row].cells[f]) {
                        l.push(row.d2h)
                    } else {
                        r.push(row.d2h)
                    }
                }
                (l, r)
            };
            if l.len() < min_leaf || r.len() < min_leaf {
                continue;
            }
            let n = (l.len() + r.len()) as f64;
            let w = l.len() as f64 / n * sd(&l) + r.len() as f64 / n * sd(&r);
            best = Some(best.map_or(w, |b: f64| b.min(w)));
        }
    }
    best
}

type CellTest = Box<dyn Fn(&Cell) -> bool>;

/// Compares the grown root split against exhaustive enumeration.
pub fn check_split_equivalence(seed: u64, n: usize, n_num: usize, n_sym: usize, min_leaf: usize) -> Result<(), String> {
    let d = random_data(seed, n, n_num, n_sym, &[false], 0.0);
    let rows = all_labeled(&d);
    let ys: Vec<f64> = rows.iter().map(|r| r.d2h).collect();
    let stats = GoalStats {
        min: 0.0,
        median: median(&ys).unwrap().max(1e-6),
    };
    let tree = grow_tree(&d, &rows, &stats, TreeConfig { min_leaf }).unwrap();
    let brute = brute_force_min(&d, &rows, min_leaf);
    let root_sd = sd(&ys);
    match (tree.nodes[0].is_leaf(), brute) {
        (true, None) => Ok(()),
        (true, Some(b)) if b >= root_sd - 1e-12 || n < 2 * min_leaf => Ok(()),
        (false, Some(b)) => {
            let got = node_weighted_impurity(&tree, 0);
            if (got - b).abs() <= 1e-9 {
                Ok(())
            } else {
                Err(format!("tree {got} vs brute force {b}"))
            }
        }
        (leaf, b) => Err(format!("leaf={leaf} brute={b:?} root sd={root_sd}")),
    }
}
