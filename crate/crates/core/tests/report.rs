use koszulkit::corpus;
use koszulkit::koszul::HomologyAlgebra;
use koszulkit::report::{render_betti_table, table_from_dims};
use koszulkit::resolution::betti_table_over_polynomial_ring;

const CASE54: &str = "            0 1  2  3 4
     total: 1 6 13 12 4
         0: 1 .  .  . .
         1: . 6  4  . .
         2: . .  9 12 4
";

const SOCLE4: &str = "            0  1  2  3 4
     total: 1 13 22 12 2
         0: 1  .  .  . .
         1: .  .  .  . .
         2: . 13 19  5 .
         3: .  .  3  6 .
         4: .  .  .  1 2
";

#[test]
fn golden_tables() {
    for (name, golden) in [("case54", CASE54), ("socle4", SOCLE4)] {
        let r = corpus::get(name).unwrap().build().unwrap();
        let via_homology = render_betti_table(&table_from_dims(&HomologyAlgebra::compute(&r).unwrap().dims()));
        let via_resolution = render_betti_table(&betti_table_over_polynomial_ring(&r).unwrap());
        assert_eq!(via_homology, golden, "{name}");
        assert_eq!(via_resolution, golden, "{name}");
    }
}
