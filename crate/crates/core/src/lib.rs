pub mod exactlin;
pub mod groups;
pub mod report;
pub mod scwol;
pub mod cog;
pub mod bhcat;
pub mod sheaf;
pub mod develop;
pub mod format;
pub mod fixtures;
pub mod random;
