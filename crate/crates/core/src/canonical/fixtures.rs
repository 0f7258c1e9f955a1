use super::CanonicalError;
use crate::geometry::EmbeddedMesh;

/// Uniform 6-point sample (seed 2) after one radial rescaling in `[1, 4]`;
/// exactly two of its twelve edges are concave.
pub const TWO_CONCAVE_6: &str = r#"{"vertices":[[-1.645817324314816,-0.5168768744632822,2.0342198019125863],[1.5662180563753703,-1.958965631701129,1.7788102797516723],[-1.31353219713665,-2.6098310267967073,-1.9535530805770918],[1.3701662764545663,0.14296736960435835,2.356727089716299],[0.3057580181979613,2.296577411026836,-2.0130993235577233],[0.9101117500132693,-0.1483150654994103,0.5353594916970611]],"faces":[[4,5,2],[0,4,2],[0,2,1],[2,5,1],[5,4,3],[4,0,3],[0,1,3],[1,5,3]],"genus":0}"#;

/// Uniform 9-point sample (seed 4) after one radial rescaling in `[1, 4]`;
/// four of its edges are concave.
pub const NONCONVEX_9: &str = r#"{"vertices":[[1.6616340398419671,0.7795841290626654,0.9315198421614324],[0.10123847224955314,-1.3965720902600662,1.6221363723595863],[0.5818411641552507,-0.6751158047179621,-0.7064489010045901],[-0.7571728886611981,0.09297726559479522,-1.2458710110296556],[1.8118988263623104,-0.786375421934447,0.5071038842757812],[-0.6390018294434266,-0.8453956075432612,1.197594742175823],[0.34143265341048606,-3.5882487443857687,-1.2535345918698428],[2.0157044122537116,1.361083370352171,-2.0573582022486945],[-2.3815063633286835,1.2993335353715145,1.4074290944376644]],"faces":[[0,5,1],[0,1,4],[5,3,6],[3,2,6],[1,5,6],[2,4,6],[4,1,6],[2,3,7],[0,4,7],[4,2,7],[3,5,8],[5,0,8],[0,7,8],[7,3,8]],"genus":0}"#;

const FIXTURES: [(&str, &str); 2] = [("two-concave-6", TWO_CONCAVE_6), ("nonconvex-9", NONCONVEX_9)];

pub fn fixture_names() -> Vec<&'static str> {
    FIXTURES.iter().map(|f| f.0).collect()
}

pub fn load_fixture(name: &str) -> Result<EmbeddedMesh, CanonicalError> {
    let text = FIXTURES
        .iter()
        .find(|f| f.0 == name)
        .ok_or_else(|| CanonicalError::InvalidParameters(format!("unknown fixture `{name}`")))?
        .1;
    EmbeddedMesh::from_json(text).map_err(|e| CanonicalError::InvalidParameters(e.to_string()))
}
