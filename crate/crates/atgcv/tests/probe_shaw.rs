use atgcv::dense::svd;
use atgcv::problems::{make_problem, ProblemKind};

#[test]
fn shaw_sigmas() {
    let p = make_problem(ProblemKind::Shaw, 32).unwrap();
    let f = svd(&p.a).unwrap();
    for j in 1..=20 {
        let s = f.sigma[j - 1];
        let ratio = if j > 1 { f.sigma[j - 2] / s } else { 0.0 };
        println!("j={:2} sigma={:.6e} prev/cur={:.3} ln-drop={:.3}", j, s, ratio, ratio.ln());
    }
    // fits over several windows
    for (lo, hi) in [(3usize, 12usize), (4, 13), (2, 12), (3, 10), (5, 14), (3, 14)] {
        let js: Vec<f64> = (lo..=hi).map(|j| j as f64).collect();
        let ls: Vec<f64> = (lo..=hi).map(|j| f.sigma[j - 1].ln()).collect();
        let n = js.len() as f64;
        let jm = js.iter().sum::<f64>() / n;
        let lm = ls.iter().sum::<f64>() / n;
        let num: f64 = js.iter().zip(&ls).map(|(j, l)| (j - jm) * (l - lm)).sum();
        let den: f64 = js.iter().map(|j| (j - jm) * (j - jm)).sum();
        println!("window [{},{}]: alpha = {:.3}", lo, hi, -num / den);
    }
}
