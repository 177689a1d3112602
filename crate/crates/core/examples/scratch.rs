use lattice_covering::density::ProductBody;
use lattice_covering::lift::random_translation_mean;
use std::f64::consts::PI;

fn main() {
    let delta = 1.0 - PI / 4.0;
    let target = delta * delta;
    let disk = ProductBody::single_ball(2, 0.5);
    for seed in [2u64, 3, 5, 6] {
        let out = random_translation_mean(&disk, 100, 10_000, seed).unwrap();
        let dev = (out.mean - target) / out.std_error;
        let i = random_translation_mean(&ProductBody::single_ball(1, 0.25), 100, 10_000, seed).unwrap();
        let idev = (i.mean - 0.25) / i.std_error;
        println!("seed {seed}: disk dev {dev:+.2}, interval dev {idev:+.2}");
    }
}
