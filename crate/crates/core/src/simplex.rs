//! Nelder–Mead simplex minimization.

#[derive(Debug, Clone)]
pub struct SimplexOptions {
    /// Initial edge length along each coordinate.
    pub initial_step: Vec<f64>,
    /// Stop once every vertex is within this distance of the best one...
    pub x_tol: f64,
    /// ...and the objective spread is below this.
    pub f_tol: f64,
    pub max_iter: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Minimize `f` starting from `start`. Non-finite objective values are
/// treated as `+∞`, which lets callers encode box constraints.
pub fn minimize<F>(f: F, start: &[f64], opts: &SimplexOptions) -> SimplexOutcome
where
    F: Fn(&[f64]) -> f64,
{
    let dim = start.len();
    assert_eq!(
        opts.initial_step.len(),
        dim,
        "step/start dimension mismatch"
    );
    let eval = |x: &[f64]| {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut vertices: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    vertices.push(start.to_vec());
    for i in 0..dim {
        let mut v = start.to_vec();
        v[i] += opts.initial_step[i];
        vertices.push(v);
    }
    let mut values: Vec<f64> = vertices.iter().map(|v| eval(v)).collect();

    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iter {
        // Stable sort keeps tie order deterministic.
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        vertices = order.iter().map(|&i| vertices[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let spread = values[dim] - values[0];
        let size = vertices[1..]
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&vertices[0])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if size <= opts.x_tol && spread.abs() <= opts.f_tol {
            converged = true;
            break;
        }
        iterations += 1;

        let centroid: Vec<f64> = (0..dim)
            .map(|j| vertices[..dim].iter().map(|v| v[j]).sum::<f64>() / dim as f64)
            .collect();
        let towards = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&vertices[dim])
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let reflected = towards(1.0);
        let f_r = eval(&reflected);
        if f_r < values[0] {
            let expanded = towards(2.0);
            let f_e = eval(&expanded);
            if f_e < f_r {
                vertices[dim] = expanded;
                values[dim] = f_e;
            } else {
                vertices[dim] = reflected;
                values[dim] = f_r;
            }
            continue;
        }
        if f_r < values[dim - 1] {
            vertices[dim] = reflected;
            values[dim] = f_r;
            continue;
        }
        let (contracted, f_c) = if f_r < values[dim] {
            let c = towards(0.5);
            let fc = eval(&c);
            (c, fc)
        } else {
            let c = towards(-0.5);
            let fc = eval(&c);
            (c, fc)
        };
        if f_c < values[dim].min(f_r) {
            vertices[dim] = contracted;
            values[dim] = f_c;
            continue;
        }
        let best = vertices[0].clone();
        for i in 1..=dim {
            for (x, b) in vertices[i].iter_mut().zip(&best) {
                *x = b + 0.5 * (*x - b);
            }
            values[i] = eval(&vertices[i]);
        }
    }

    let best = (0..=dim)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .expect("simplex has vertices");
    SimplexOutcome {
        x: vertices[best].clone(),
        value: values[best],
        iterations,
        converged,
    }
}
