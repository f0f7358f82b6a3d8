//! Partial broadcasters built from interaction witnesses, the measurements
//! they induce, and the decomposition those measurements reveal.

use crate::decompose::{irreducible_components, Decomposition};
use crate::geometry::matrix::{dot, scale};
use crate::geometry::{Field, Matrix, Rational};
use crate::statespace::{covector_from_values, Side, SpaceError, StateSpace};

use super::{identity_on_span, split_product, InteractionError, LriWitness};

/// A map from one factor into the composite that leaves the input intact
/// once the other output is discarded.
#[derive(Debug, Clone)]
pub struct PartialBroadcaster<F: Field = Rational> {
    /// The factor being broadcast; the other factor receives the copy.
    pub kept: Side,
    pub composite: StateSpace<F>,
    /// Vertex of the other factor fed into the interaction.
    pub fixed_vertex: usize,
    /// `d_composite × d_kept` matrix.
    pub matrix: Matrix<F>,
}

impl<F: Field> PartialBroadcaster<F> {
    fn factors(&self) -> (&StateSpace<F>, &StateSpace<F>) {
        self.composite.tensor_factors().expect("broadcaster composite is a tensor product")
    }

    /// The broadcast factor.
    pub fn source(&self) -> &StateSpace<F> {
        let (a, b) = self.factors();
        match self.kept {
            Side::A => a,
            Side::B => b,
        }
    }

    /// The factor that receives the copy.
    pub fn other(&self) -> &StateSpace<F> {
        let (a, b) = self.factors();
        match self.kept {
            Side::A => b,
            Side::B => a,
        }
    }

    /// Matrix of "apply the covector to the copy output":
    /// `d_kept × d_composite`.
    pub fn contract_other(&self, covector: &[F]) -> Matrix<F> {
        let row = Matrix::from_rows(&[covector.to_vec()]);
        let id = Matrix::identity(self.source().ambient_dim());
        match self.kept {
            Side::A => id.kron(&row),
            Side::B => row.kron(&id),
        }
    }

    /// Discarding the copy gives back the input on the source.
    pub fn discard_identity_holds(&self) -> bool {
        let discard = self.contract_other(self.other().unit_effect());
        identity_on_span(self.source(), &discard.mul(&self.matrix))
    }
}

fn column<F: Field>(v: &[F]) -> Matrix<F> {
    Matrix::from_columns(v.len(), &[v.to_vec()])
}

/// `B(a) = (X_b⁻¹ ⊗ id) T (a ⊗ b)` for the vertex `b = b_j`, which acts as
/// `a ↦ a ⊗ Y_a(b)` on pure states.
pub fn partial_broadcaster<F: Field>(w: &LriWitness<F>, j: usize) -> Result<PartialBroadcaster<F>, InteractionError> {
    let (a, b) = w.factors();
    if j >= b.vertex_count() {
        return Err(SpaceError::from(crate::geometry::GeometryError::IndexOutOfRange { index: j, len: b.vertex_count() }).into());
    }
    let feed = Matrix::identity(a.ambient_dim()).kron(&column(b.vertex(j)));
    let undo = w.x[j].inverse.kron(&Matrix::identity(b.ambient_dim()));
    let pb = PartialBroadcaster {
        kept: Side::A,
        composite: w.composite.clone(),
        fixed_vertex: j,
        matrix: undo.mul(&w.matrix).mul(&feed),
    };
    for i in 0..a.vertex_count() {
        let expected = crate::geometry::matrix::kron(a.vertex(i), &w.y[i].apply(b.vertex(j)));
        if pb.matrix.mul_vec(a.vertex(i)) != expected {
            return Err(InteractionError::InvalidWitness(w.composite.pair_index(i, j)));
        }
    }
    Ok(pb)
}

/// `B'(b) = (id ⊗ Y_a⁻¹) T (a ⊗ b)` for the vertex `a = a_i`, which acts as
/// `b ↦ X_b(a) ⊗ b` on pure states.
pub fn partial_broadcaster_mirrored<F: Field>(w: &LriWitness<F>, i: usize) -> Result<PartialBroadcaster<F>, InteractionError> {
    let (a, b) = w.factors();
    if i >= a.vertex_count() {
        return Err(SpaceError::from(crate::geometry::GeometryError::IndexOutOfRange { index: i, len: a.vertex_count() }).into());
    }
    let feed = column(a.vertex(i)).kron(&Matrix::identity(b.ambient_dim()));
    let undo = Matrix::identity(a.ambient_dim()).kron(&w.y[i].inverse);
    let pb = PartialBroadcaster {
        kept: Side::B,
        composite: w.composite.clone(),
        fixed_vertex: i,
        matrix: undo.mul(&w.matrix).mul(&feed),
    };
    for j in 0..b.vertex_count() {
        let expected = crate::geometry::matrix::kron(&w.x[j].apply(a.vertex(i)), b.vertex(j));
        if pb.matrix.mul_vec(b.vertex(j)) != expected {
            return Err(InteractionError::InvalidWitness(w.composite.pair_index(i, j)));
        }
    }
    Ok(pb)
}

/// What a broadcaster writes into the copy register for each pure input.
#[derive(Debug, Clone, PartialEq)]
pub struct FMap<F: Field = Rational> {
    /// `images[s]` is `f(s)` in the other factor's coordinates.
    pub images: Vec<Vec<F>>,
    /// Vertex index of `f(s)` when it is pure.
    pub image_vertices: Vec<Option<usize>>,
}

impl<F: Field> FMap<F> {
    pub fn is_constant(&self) -> bool {
        self.images.windows(2).all(|w| w[0] == w[1])
    }

    pub fn all_pure(&self) -> bool {
        self.image_vertices.iter().all(Option::is_some)
    }
}

pub fn broadcast_f_map<F: Field>(pb: &PartialBroadcaster<F>) -> Result<FMap<F>, InteractionError> {
    let (a, b) = pb.factors();
    let source = pb.source();
    let mut images = Vec::with_capacity(source.vertex_count());
    let mut image_vertices = Vec::with_capacity(source.vertex_count());
    for (s, v) in source.vertices().iter().enumerate() {
        let out = pb.matrix.mul_vec(v);
        let (x, y) = split_product(&out, a, b).ok_or(InteractionError::NotProduct(s))?;
        let (kept, copy) = match pb.kept {
            Side::A => (x, y),
            Side::B => (y, x),
        };
        if kept != v.as_slice() {
            return Err(InteractionError::NotBroadcasting(s));
        }
        image_vertices.push(pb.other().vertex_index(&copy));
        images.push(copy);
    }
    Ok(FMap { images, image_vertices })
}

/// `M_e = (id ⊗ e) ∘ B` for each effect `e` of a complete measurement on the
/// copy register.
#[derive(Debug, Clone)]
pub struct MeasurementFamily<F: Field = Rational> {
    pub space: StateSpace<F>,
    pub effects: Vec<Vec<F>>,
    pub maps: Vec<Matrix<F>>,
    pub f: FMap<F>,
}

impl<F: Field> MeasurementFamily<F> {
    /// `Σ_e M_e` acts as the identity.
    pub fn is_complete(&self) -> bool {
        let d = self.space.ambient_dim();
        let sum = self.maps.iter().fold(Matrix::zeros(d, d), |acc, m| acc.add(m));
        identity_on_span(&self.space, &sum)
    }

    /// `λ_e(s)` with `M_e(s) = λ_e(s) s`, per pure state.
    pub fn eigenvalues(&self) -> Result<Vec<Vec<F>>, InteractionError> {
        self.space
            .vertices()
            .iter()
            .enumerate()
            .map(|(s, v)| {
                let k = v.iter().position(|x| !x.is_zero()).expect("vertices are nonzero");
                self.maps
                    .iter()
                    .enumerate()
                    .map(|(e, m)| {
                        let image = m.mul_vec(v);
                        let lambda = image[k].clone() / &v[k];
                        if scale(v, &lambda) == image {
                            Ok(lambda)
                        } else {
                            Err(InteractionError::NotNonDisturbing { effect: e, vertex: s })
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

pub fn nondisturbing_measurement<F: Field>(
    pb: &PartialBroadcaster<F>,
    effects: &[Vec<F>],
) -> Result<MeasurementFamily<F>, InteractionError> {
    let other = pb.other();
    if effects.iter().any(|e| e.len() != other.ambient_dim()) {
        return Err(InteractionError::IncompleteEffects);
    }
    let complete = other
        .vertices()
        .iter()
        .all(|v| effects.iter().fold(F::zero(), |acc, e| acc + &dot(e, v)).is_one());
    if !complete {
        return Err(InteractionError::IncompleteEffects);
    }
    let f = broadcast_f_map(pb)?;
    let maps: Vec<Matrix<F>> = effects.iter().map(|e| pb.contract_other(e).mul(&pb.matrix)).collect();
    for (e, (m, cov)) in maps.iter().zip(effects).enumerate() {
        for (s, v) in pb.source().vertices().iter().enumerate() {
            if m.mul_vec(v) != scale(v, &dot(cov, &f.images[s])) {
                return Err(InteractionError::NotNonDisturbing { effect: e, vertex: s });
            }
        }
    }
    let family = MeasurementFamily { space: pb.source().clone(), effects: effects.to_vec(), maps, f };
    debug_assert!(family.is_complete());
    Ok(family)
}

/// Groups pure states by their outcome profile `(λ_e(s))_e`; two or more
/// groups give a direct-sum decomposition.
pub fn extract_decomposition<F: Field>(mf: &MeasurementFamily<F>) -> Result<Option<Decomposition<F>>, InteractionError> {
    let lambdas = mf.eigenvalues()?;
    let mut profiles: Vec<&Vec<F>> = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for (s, l) in lambdas.iter().enumerate() {
        match profiles.iter().position(|p| *p == l) {
            Some(k) => blocks[k].push(s),
            None => {
                profiles.push(l);
                blocks.push(vec![s]);
            }
        }
    }
    if blocks.len() < 2 {
        return Ok(None);
    }
    Ok(Some(Decomposition::from_blocks(&mf.space, blocks)?))
}

/// One effect per irreducible component, equal to 1 on that component's
/// vertices and 0 on the rest. Together they form a complete measurement.
pub fn component_indicator_effects<F: Field>(space: &StateSpace<F>) -> Vec<Vec<F>> {
    let dec = irreducible_components(space);
    let block_of = dec.block_of();
    (0..dec.len())
        .map(|k| {
            let values: Vec<F> = block_of.iter().map(|&b| if b == k { F::one() } else { F::zero() }).collect();
            covector_from_values(space, &values).expect("component indicators are linear")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::field::q;
    use crate::interactions::maps::{cnot, controlled_map};
    use crate::interactions::tests::groups;
    use crate::interactions::{lri_decompose, LocalGroups};
    use crate::statespace::{direct_sum, gbit, simplex};

    fn cnot_witness() -> LriWitness<Rational> {
        let d1 = simplex::<Rational>(1);
        lri_decompose(&cnot(), &groups(&d1, &d1)).unwrap().unwrap()
    }

    #[test]
    fn cnot_broadcaster_copies() {
        let w = cnot_witness();
        let pb = partial_broadcaster(&w, 0).unwrap();
        let d1 = simplex::<Rational>(1);
        for v in d1.vertices() {
            assert_eq!(pb.matrix.mul_vec(v), crate::geometry::matrix::kron(v, v));
        }
        assert!(pb.discard_identity_holds());
        let f = broadcast_f_map(&pb).unwrap();
        assert_eq!(f.image_vertices, vec![Some(0), Some(1)]);
        assert!(!f.is_constant() && f.all_pure());
    }

    #[test]
    fn cnot_measurement_and_decomposition() {
        let w = cnot_witness();
        let pb = partial_broadcaster(&w, 0).unwrap();
        let d1 = simplex::<Rational>(1);
        let effects = component_indicator_effects(&d1);
        let mf = nondisturbing_measurement(&pb, &effects).unwrap();
        assert!(mf.is_complete());
        assert_eq!(mf.maps[0].mul_vec(d1.vertex(0)), d1.vertex(0));
        assert!(mf.maps[0].mul_vec(d1.vertex(1)).iter().all(|x| x.is_zero()));
        let dec = extract_decomposition(&mf).unwrap().unwrap();
        assert_eq!(dec.blocks(), vec![vec![0], vec![1]]);
    }

    #[test]
    fn trivial_broadcasters() {
        let g = gbit::<Rational>();
        let lg = groups(&g, &g);
        let t = lg.a.element(2).matrix.kron(&lg.b.element(6).matrix);
        let w = lri_decompose(&t, &lg).unwrap().unwrap();
        for j in 0..4 {
            let pb = partial_broadcaster(&w, j).unwrap();
            assert!(pb.discard_identity_holds());
            let f = broadcast_f_map(&pb).unwrap();
            assert!(f.is_constant());
            assert_eq!(f.images[0], lg.b.element(6).apply(g.vertex(j)));
            let effects = crate::statespace::extremal_effects(&g, 1 << 20).unwrap();
            let pair = vec![effects[2].covector().to_vec(), crate::geometry::matrix::sub(g.unit_effect(), effects[2].covector())];
            let mf = nondisturbing_measurement(&pb, &pair).unwrap();
            for (m, e) in mf.maps.iter().zip(&pair) {
                assert_eq!(*m, Matrix::identity(3).scale(&dot(e, &f.images[0])));
            }
            assert!(extract_decomposition(&mf).unwrap().is_none());
        }
        let pb = partial_broadcaster_mirrored(&w, 1).unwrap();
        assert!(pb.discard_identity_holds());
        assert!(broadcast_f_map(&pb).unwrap().is_constant());
    }

    #[test]
    fn unit_effect_alone_gives_identity() {
        let pb = partial_broadcaster(&cnot_witness(), 1).unwrap();
        let u = simplex::<Rational>(1).unit_effect().to_vec();
        let mf = nondisturbing_measurement(&pb, &[u]).unwrap();
        assert!(mf.maps[0].is_identity());
        assert!(extract_decomposition(&mf).unwrap().is_none());
    }

    #[test]
    fn incomplete_effects_rejected() {
        let pb = partial_broadcaster(&cnot_witness(), 0).unwrap();
        let half = vec![q(1, 2), q(0, 1)];
        assert_eq!(nondisturbing_measurement(&pb, &[half]).unwrap_err(), InteractionError::IncompleteEffects);
    }

    #[test]
    fn which_component_broadcast() {
        let g = gbit::<Rational>();
        let gg = direct_sum(&g, &g);
        let d1 = simplex::<Rational>(1);
        let flip = Matrix::from_rows(&[vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(0, 1)]]);
        let t = controlled_map(&gg, &d1, &[Matrix::identity(2), flip]).unwrap();
        let lg = LocalGroups::compute(&gg, &d1, 10_000_000).unwrap();
        let w = lri_decompose(&t, &lg).unwrap().unwrap();
        let pb = partial_broadcaster(&w, 0).unwrap();
        let mf = nondisturbing_measurement(&pb, &component_indicator_effects(&d1)).unwrap();
        let dec = extract_decomposition(&mf).unwrap().unwrap();
        assert_eq!(dec.blocks(), vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7]]);
    }
}
