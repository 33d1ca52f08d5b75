use thiserror::Error;

use crate::partitions::Partition;

pub type Result<T> = std::result::Result<T, HurwitzError>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HurwitzError {
    #[error("incompatible sizes: {left} has size {left_size}, {right} has size {right_size}")]
    IncompatibleSizes { left: Partition, left_size: u32, right: Partition, right_size: u32 },
    #[error("class {class} is not a partition of degree {degree}")]
    ClassSizeMismatch { class: Partition, degree: u32 },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("incompatible truncation orders")]
    IncompatibleTruncation,
    #[error("exp requires zero constant term")]
    ExpConstantTerm,
    #[error("log requires constant term 1")]
    LogConstantTerm,
    #[error("series has a non-constant term of grade zero ({0}); exp/log undefined")]
    ZeroGradeTerm(String),
    #[error("unsupported shift order: {0}")]
    UnsupportedShiftOrder(String),
    #[error("oracle scale limit: {0}")]
    OracleScaleLimit(String),
    #[error("restricted Hirota scope: {0}")]
    RestrictedHirotaScope(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
