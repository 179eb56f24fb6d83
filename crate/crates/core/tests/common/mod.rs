#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::Arc;

use cogsheaf::bhcat::build_bh_category;
use cogsheaf::exactlin::Matrix;
use cogsheaf::scwol::ObjectId;
use cogsheaf::sheaf::{sheaf_value, Sheaf};

/// Materializes the sheaf as a functor on the whole B.H. category and checks
/// `F(1) = I` and `F(xy) = F(x) F(y)` on every composable pair.
pub fn functor_oracle(f: &Sheaf) -> bool {
    let Ok(cat) = build_bh_category(Arc::clone(f.complex())) else {
        return false;
    };
    let values: HashMap<_, _> =
        cat.arrows().into_iter().map(|x| (x, sheaf_value(f, x).expect("arrow of the category"))).collect();
    let value = |x| &values[&x];
    for o in 0..cat.object_count() {
        let id = value(cat.identity(ObjectId(o)));
        if *id != Matrix::identity(f.field(), f.dim(ObjectId(o))) {
            return false;
        }
    }
    cat.composable_pairs().into_iter().all(|(x, y)| {
        let xy = cat.compose(x, y).expect("composable");
        matches!(value(x).mul(value(y)), Ok(m) if m == *value(xy))
    })
}
