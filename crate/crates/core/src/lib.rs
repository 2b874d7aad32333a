pub mod error;
pub mod expr;
pub mod field;
pub mod gram;
pub mod gw;
pub mod hilbert;
pub mod power;
pub mod ring;
pub mod series;
pub mod witt;
pub mod astructure;
pub mod sample;
pub mod axioms;
pub mod etale;
pub mod variety;
pub mod goettsche;
