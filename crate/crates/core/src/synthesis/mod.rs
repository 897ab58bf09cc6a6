//! Construction of Z-retractions of the unit cube onto collapsible polyhedra.

mod chain;
mod perp;
mod pipeline;
mod star;
mod xi;

pub use chain::{
    collapse_chain_retraction, cone_stage, phi_retraction, vertex_target, RetractionChain, Stage,
};
pub use perp::{is_perp_shaped, perp_embed, perp_embed_with_first, PerpEmbedding};
pub use pipeline::{build_cube_retraction, BuildOptions, CubeCertificate, CubeRetraction};
pub use star::{
    assignment_search, cone_collapse, fold, star_retraction, truncation, StarOptions,
    StarRetraction,
};
pub use xi::{normal_form, verified_xi_retraction, xi_image, xi_retraction, XiConstructionTrace};
