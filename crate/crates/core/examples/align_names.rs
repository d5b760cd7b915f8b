//! Name normalization, trigram embeddings and the exact / normalized /
//! embedding / new link cascade.
//!
//!     cargo run --example align_names

use aquasub::align::{embed_text, link_entities, normalize_name, LinkConfig};

fn main() {
    for raw in ["vanilla-flavored soy yogurt", "Fresh Chopped (ripe) Tomatoes", "Organic Oat Cream", "coconut creme"] {
        println!("{raw:?} -> {:?}", normalize_name(raw).as_str());
    }

    let soy = embed_text("soy yogurt");
    for other in ["soy yoghurt", "soya yogurt", "beef steak"] {
        println!("cosine(soy yogurt, {other}) = {:.3}", soy.cosine(&embed_text(other)));
    }

    let canonical = [("soy_yogurt", "soy yogurt"), ("beef_steak", "beef steak"), ("oat_cream", "oat cream")];
    let names = [vec!["soy_yogurt", "Soy Yogurt!", "soy yoghurt"], vec!["organic oat cream", "quinoa flakes"]];
    let table = link_entities(names.iter().map(|v| v.iter().copied()), &canonical, LinkConfig::default()).unwrap();
    println!();
    print!("{}", table.to_csv());
}
