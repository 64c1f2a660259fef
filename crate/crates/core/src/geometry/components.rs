use crate::imgio::BinaryImage;

/// 8-connected component labelling. `labels[i]` is `0` for background and
/// `k + 1` for pixels of component `k`; components are numbered in raster
/// order of their first pixel.
#[derive(Clone, Debug)]
pub struct Components {
    pub labels: Vec<u32>,
    pub sizes: Vec<usize>,
}

const NEIGHBORS_8: [(i64, i64); 8] = [
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
];

pub fn label_components(img: &BinaryImage) -> Components {
    let (w, h) = (img.width(), img.height());
    let mut labels = vec![0u32; w * h];
    let mut sizes = Vec::new();
    let mut stack = Vec::new();
    for start in 0..w * h {
        if !img.pixels()[start] || labels[start] != 0 {
            continue;
        }
        let label = sizes.len() as u32 + 1;
        let mut size = 0;
        labels[start] = label;
        stack.push(start);
        while let Some(i) = stack.pop() {
            size += 1;
            let (x, y) = ((i % w) as i64, (i / w) as i64);
            for (dx, dy) in NEIGHBORS_8 {
                let (nx, ny) = (x + dx, y + dy);
                if img.get_or_bg(nx, ny) {
                    let j = ny as usize * w + nx as usize;
                    if labels[j] == 0 {
                        labels[j] = label;
                        stack.push(j);
                    }
                }
            }
        }
        sizes.push(size);
    }
    Components { labels, sizes }
}

/// Mask of the largest 8-connected component; ties go to the component met
/// first in raster order. Returns `None` for an empty image.
pub fn largest_component(img: &BinaryImage) -> Option<BinaryImage> {
    let comps = label_components(img);
    let best = comps
        .sizes
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))?
        .0 as u32
        + 1;
    if comps.sizes.len() == 1 {
        return Some(img.clone());
    }
    let pixels = comps.labels.iter().map(|&l| l == best).collect();
    BinaryImage::new(img.width(), img.height(), pixels).ok()
}
