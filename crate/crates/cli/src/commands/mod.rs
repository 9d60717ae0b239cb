pub mod block;
pub mod compare;
pub mod fit;
pub mod gof;
pub mod return_level;
pub mod simulate;
