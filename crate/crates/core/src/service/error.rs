use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use serde::Serialize;

use crate::graph::GraphError;
use crate::recommend::RecommendError;

/// An HTTP error: status, stable machine code and a message.
#[derive(Debug, Clone, PartialEq)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        Self { status, code, message: message.into() }
    }

    pub fn bad_request(code: &'static str, message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, code, message)
    }

    pub fn body(&self) -> String {
        #[derive(Serialize)]
        struct Inner<'a> {
            code: &'a str,
            message: &'a str,
        }
        #[derive(Serialize)]
        struct Outer<'a> {
            error: Inner<'a>,
        }
        serde_json::to_string(&Outer { error: Inner { code: self.code, message: &self.message } }).expect("error body")
    }
}

impl From<GraphError> for ApiError {
    fn from(e: GraphError) -> Self {
        let (status, code) = match &e {
            GraphError::UnknownNode(_) => (StatusCode::NOT_FOUND, "unknown_node"),
            GraphError::NotAnIngredient(_) => (StatusCode::UNPROCESSABLE_ENTITY, "not_an_ingredient"),
            GraphError::NoParent(_) => (StatusCode::UNPROCESSABLE_ENTITY, "no_parent"),
            GraphError::MultipleParents { .. } => (StatusCode::INTERNAL_SERVER_ERROR, "multiple_parents"),
            GraphError::UnknownRelationLabel { .. }
            | GraphError::CycleDetected { .. }
            | GraphError::InvalidEdge { .. }
            | GraphError::DuplicateEdgeId(_)
            | GraphError::DuplicateValue { .. }
            | GraphError::SnapshotMismatch { .. }
            | GraphError::MalformedSnapshot(_)
            | GraphError::Ingest(_) => (StatusCode::INTERNAL_SERVER_ERROR, "invalid_snapshot"),
        };
        Self::new(status, code, e.to_string())
    }
}

impl From<RecommendError> for ApiError {
    fn from(e: RecommendError) -> Self {
        match e {
            RecommendError::NoFootprint(_) => Self::new(StatusCode::UNPROCESSABLE_ENTITY, "no_footprint", e.to_string()),
            RecommendError::NotARecommendedCandidate { .. } => {
                Self::new(StatusCode::CONFLICT, "not_a_recommended_candidate", e.to_string())
            }
            RecommendError::Graph(g) => g.into(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, [(axum::http::header::CONTENT_TYPE, "application/json")], self.body()).into_response()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mapping() {
        let cases: [(ApiError, u16, &str); 5] = [
            (GraphError::UnknownNode("x".into()).into(), 404, "unknown_node"),
            (RecommendError::NoFootprint("x".into()).into(), 422, "no_footprint"),
            (
                RecommendError::NotARecommendedCandidate { original: "a".into(), candidate: "b".into() }.into(),
                409,
                "not_a_recommended_candidate",
            ),
            (GraphError::MultipleParents { node: "a".into(), parents: vec!["b".into(), "c".into()] }.into(), 500, "multiple_parents"),
            (GraphError::CycleDetected { path: vec!["a".into(), "a".into()] }.into(), 500, "invalid_snapshot"),
        ];
        for (e, status, code) in cases {
            assert_eq!((e.status.as_u16(), e.code), (status, code));
        }
        let body = ApiError::bad_request("empty_query", "q must not be empty").body();
        assert_eq!(body, r#"{"error":{"code":"empty_query","message":"q must not be empty"}}"#);
    }
}
