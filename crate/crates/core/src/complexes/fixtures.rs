//! The built-in fixture corpus: small covers with a distinguished cycle.

use super::{
    build_presentation_complex, cross_chain, product_complex, surface_complex, surface_projection,
    Chain, EquivariantChainComplex, GroupPresentation, PeriodProjection, PresentationFile,
};

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    pub complex: EquivariantChainComplex,
    pub cycle: Chain,
    /// The input file, for fixtures that come from a presentation.
    pub file: Option<PresentationFile>,
}

fn from_presentation(
    name: &str,
    pres: GroupPresentation,
    proj: PeriodProjection,
    degree: usize,
    cell: &str,
) -> Fixture {
    let complex = build_presentation_complex(&pres, &proj).expect("fixture presentation is valid");
    let idx = complex
        .cell_index(degree, cell)
        .expect("fixture cell exists");
    let cycle = complex.basis_chain(degree, idx);
    debug_assert!(complex.is_cycle(&cycle).unwrap());
    Fixture {
        name: name.to_string(),
        file: Some(PresentationFile {
            presentation: pres,
            projection: proj,
            cycle: Some(cycle.clone()),
        }),
        complex,
        cycle,
    }
}

/// `<t | >` over Z with `xi(t) = 1`; the cycle is the vertex.
pub fn circle() -> Fixture {
    from_presentation(
        "circle",
        GroupPresentation::from_strings(&["t"], &[]).unwrap(),
        PeriodProjection::rank_one(&[1], 1).unwrap(),
        0,
        "v",
    )
}

/// `<a, b | [a, b]>` with `a -> t`, `b -> 0`; the cycle is the edge `b`.
pub fn torus() -> Fixture {
    from_presentation(
        "torus",
        GroupPresentation::from_strings(&["a", "b"], &["a b a^-1 b^-1"]).unwrap(),
        PeriodProjection::rank_one(&[1, 0], 1).unwrap(),
        1,
        "b",
    )
}

/// `BS(1,2) = <a, t | t a t^-1 a^-2>` with `a -> 0`, `t -> t`, `xi(t) = sign`;
/// the cycle is the edge `a`.
pub fn bs12(sign: i64) -> Fixture {
    from_presentation(
        if sign > 0 { "bs12" } else { "bs12-neg" },
        GroupPresentation::from_strings(&["a", "t"], &["t a t^-1 a^-2"]).unwrap(),
        PeriodProjection::rank_one(&[0, 1], sign).unwrap(),
        1,
        "a",
    )
}

/// The genus-`g` surface with `a1 -> t`; the cycle is the edge `a2` (`b1` for `g = 1`).
pub fn genus(g: usize) -> Fixture {
    let cell = if g >= 2 { "a2" } else { "b1" };
    from_presentation(
        &format!("genus{g}"),
        surface_complex(g).unwrap(),
        surface_projection(g, 1).unwrap(),
        1,
        cell,
    )
}

/// The genus-`g` surface over the trivial cover.
pub fn genus_trivial(g: usize) -> Fixture {
    let pres = surface_complex(g).unwrap();
    let proj = PeriodProjection::trivial(pres.generators().len());
    from_presentation(&format!("genus{g}-trivial"), pres, proj, 1, "a1")
}

/// The product of two circles over Z^2 with the diagonal class leading; the
/// cycle is the vertex.
pub fn circle_squared() -> Fixture {
    let c = circle();
    let complex = product_complex(&c.complex, &c.complex);
    let cycle = cross_chain(&c.complex, &c.complex, &c.cycle, &c.cycle);
    Fixture {
        name: "circle-squared".into(),
        complex,
        cycle,
        file: None,
    }
}

pub fn corpus() -> Vec<Fixture> {
    vec![
        circle(),
        torus(),
        bs12(1),
        bs12(-1),
        genus(2),
        genus(3),
        genus_trivial(2),
        circle_squared(),
    ]
}

pub fn by_name(name: &str) -> Option<Fixture> {
    corpus().into_iter().find(|f| f.name == name)
}
