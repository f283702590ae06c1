pub mod linalg;
pub mod polyroots;
pub mod quadrature;
pub mod simplex;
pub mod special;
pub mod summation;
