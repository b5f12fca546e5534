// Certified incommensurability ranks of small sets of exact reals.

use nepg::iid::{incommensurability_rank, Basis, ExactReal, RankOptions};

pub fn run_example() -> nepg::Result<()> {
    let basis = Basis::new(&["1", "sqrt2", "sqrt3"])?;
    let v = |c: &[&str]| ExactReal::parse(c, &basis);
    let sets = [
        ("{0, 1, 2, 3}", vec![v(&["0", "0", "0"])?, v(&["1", "0", "0"])?, v(&["2", "0", "0"])?, v(&["3", "0", "0"])?]),
        ("{0, 1, √2}", vec![v(&["0", "0", "0"])?, v(&["1", "0", "0"])?, v(&["0", "1", "0"])?]),
        ("{0, 1, √2, √3}", vec![v(&["0", "0", "0"])?, v(&["1", "0", "0"])?, v(&["0", "1", "0"])?, v(&["0", "0", "1"])?]),
        ("{0, 1/2, √2, 1+√2}", vec![v(&["0", "0", "0"])?, v(&["1/2", "0", "0"])?, v(&["0", "1", "0"])?, v(&["1", "1", "0"])?]),
    ];
    for (name, chi) in sets {
        let r = incommensurability_rank(&chi, &basis, &RankOptions::default())?;
        let witness = r.witness.as_ref().map(|w| w.subsets.clone());
        println!("{name:<20} rank >= {} (exact: {}), witness {witness:?}", r.lower, r.certified_exact);
    }
    Ok(())
}

fn main() -> nepg::Result<()> {
    run_example()
}
