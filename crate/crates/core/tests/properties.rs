use proptest::prelude::*;

use cutwave::forms::Material;
use cutwave::geometry::{LevelSet, Side};
use cutwave::quadrature::cut_cell_rules;
use cutwave::space::{BackgroundMesh, CellBox};
use cutwave::system::{Discretization, LdlFactor, Pivots, Problem};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cut_cell_parts_tile_the_cell(nx in -1.0f64..1.0, ny in -1.0f64..1.0, c in -0.3f64..1.3) {
        prop_assume!(nx.hypot(ny) > 0.1);
        let cell = CellBox { lo: [0.0, 0.0], h: 1.0 };
        let phi = LevelSet::line([nx, ny], c).unwrap();
        let rules = cut_cell_rules(&cell, &phi, 4, 0).unwrap();
        let both = rules.volume(Side::Inside).measure() + rules.volume(Side::Outside).measure();
        prop_assert!((both - 1.0).abs() < 1e-12);
        // first moments add up as well
        let mx = rules.volume(Side::Inside).integrate(|x| x[0]) + rules.volume(Side::Outside).integrate(|x| x[0]);
        prop_assert!((mx - 0.5).abs() < 1e-12);
    }

    #[test]
    fn stabilized_matrices_are_symmetric_and_mass_is_definite(
        cx in -0.3f64..0.3, cy in -0.3f64..0.3, r in 0.6f64..1.4, p in 1usize..=2,
    ) {
        let mesh = BackgroundMesh::square([-2.0, -2.0], 4.0, 6).unwrap();
        let phi = LevelSet::circle([cx, cy], r).unwrap();
        let disc = Discretization::new(Problem::interface(mesh, p, phi, [Material::SANDSTONE, Material::GRANITE])).unwrap();
        let (m, a) = disc.assemble_matrices();
        prop_assert_eq!(m.asymmetry(), 0.0);
        prop_assert_eq!(a.asymmetry(), 0.0);
        let f = LdlFactor::new(&m, &disc.node_positions(), 2, Pivots::Positive);
        prop_assert!(f.is_ok());
        let fa = LdlFactor::new(&a, &disc.node_positions(), 2, Pivots::Positive);
        prop_assert!(fa.is_ok());
    }
}
