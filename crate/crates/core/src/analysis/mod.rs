//! Statistical metrics, distortions and experiments over plain and
//! encrypted images.

pub mod attacks;
pub mod experiments;
pub mod glcm;
pub mod metrics;
pub mod report;
pub mod ssim;

pub use experiments::{
    avalanche, data_loss_ssim, differential, key_sensitivity, qr_distortion_trials, Differential,
    Summary,
};
pub use glcm::{energy, glcm, homogeneity, Glcm};
pub use metrics::{correlation, entropy, mse, npcr, psnr, uaci, Correlation, Direction};
pub use report::MetricReport;
pub use ssim::ssim;
