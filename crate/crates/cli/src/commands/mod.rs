pub mod compare;
pub mod gen_data;
pub mod score;
pub mod sigma_table;
pub mod train;
