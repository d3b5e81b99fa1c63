//! Term search and faceted exploration over stored statements.

mod facet;
mod index;
mod tokenize;

pub use facet::{histogram, FacetCount, FacetFilter, FacetQuery};
pub use index::{FacetHit, FacetResult, IndexStats, SearchIndex, TermGroup, TermHit};
pub use tokenize::tokenize;
