//! Route one project through a saved tree, then ask what single change
//! would move it to the best leaf.
//!
//!     cargo run --example counterfactual
use ezr::cli::{load_tree, parse_instance};
use ezr::data::Dataset;
use ezr::explain::{counterfactual, CounterfactualTarget};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = env!("CARGO_MANIFEST_DIR");
    let data = Dataset::from_path(format!("{root}/../../data/coc1000.csv"))?;
    let names: Vec<String> = data.columns.iter().map(|c| c.name.clone()).collect();
    let tree = load_tree(format!("{root}/fixtures/coc1000_reference.tree").as_ref(), &names)?;

    let project = parse_instance(
        &data,
        "ACAP=2,ARCH=5,DATA=3,DOCU=1,PCAP=3,PCON=1,PMAT=3,PREC=5,PVOL=3,\
         RELY=1,RUSE=2,SCED=2,SITE=4,STOR=3,TEAM=3,TIME=5,TOOL=3",
    )?;
    let path = tree.route(&project);
    print!("{}", tree.render_path(&path));

    if let Some(cf) = counterfactual(&tree, &project, CounterfactualTarget::Best) {
        println!("\nto reach the best leaf: {}", cf.describe(&tree).join(", "));
        println!(
            "win {} -> {} ({:+})",
            tree.nodes[cf.source].win, tree.nodes[cf.target].win, cf.win_gain
        );
        let edited = cf.apply(&tree, &data, &project);
        println!("edited project lands in leaf {}", tree.route(&edited).leaf);
    }
    Ok(())
}
