//! Regenerates the net files under `fixtures/` from the sample
//! constructors. Run from anywhere in the workspace:
//!
//! ```text
//! cargo run --example gen_fixtures
//! ```

use std::path::PathBuf;

use bezmesh::io::save_net;
use bezmesh::samples;

fn main() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    std::fs::create_dir_all(&dir).expect("create fixtures directory");
    let fixtures = [
        ("flat.net", samples::flat_net(3, 3)),
        ("dome.net", samples::dome_net(0.5)),
        ("saddle.net", samples::saddle_net(0.5)),
        ("folded.net", samples::folded_sheet_net()),
        ("curl.net", samples::curl_net()),
        ("cap.net", samples::cap_net()),
        ("torus.net", samples::torus_net(8, 8, 2.0, 0.8)),
        ("wobbly-torus.net", samples::wobbly_torus_net(8, 8, 2.0, 0.8, 0.3)),
    ];
    for (name, net) in fixtures {
        let path = dir.join(name);
        save_net(&net, &path).expect("write fixture");
        println!("wrote {}", path.display());
    }
}
