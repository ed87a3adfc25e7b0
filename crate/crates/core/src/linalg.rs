//! Fixed-size vector helpers shared by the geometry and calculus modules.

pub(crate) type Vec3 = [f64; 3];

#[inline]
pub(crate) fn add(u: Vec3, v: Vec3) -> Vec3 {
    [u[0] + v[0], u[1] + v[1], u[2] + v[2]]
}

#[inline]
pub(crate) fn sub(u: Vec3, v: Vec3) -> Vec3 {
    [u[0] - v[0], u[1] - v[1], u[2] - v[2]]
}

#[inline]
pub(crate) fn scale(u: Vec3, s: f64) -> Vec3 {
    [u[0] * s, u[1] * s, u[2] * s]
}

#[inline]
pub(crate) fn neg(u: Vec3) -> Vec3 {
    [-u[0], -u[1], -u[2]]
}

#[inline]
pub(crate) fn dot(u: Vec3, v: Vec3) -> f64 {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

#[inline]
pub(crate) fn cross(u: Vec3, v: Vec3) -> Vec3 {
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

#[inline]
pub(crate) fn norm(u: Vec3) -> f64 {
    dot(u, u).sqrt()
}

pub(crate) fn mat_vec(m: &[[f64; 3]; 3], v: Vec3) -> Vec3 {
    [dot(m[0], v), dot(m[1], v), dot(m[2], v)]
}

pub(crate) fn quad_form(m: &[[f64; 3]; 3], v: Vec3) -> f64 {
    dot(v, mat_vec(m, v))
}

pub(crate) fn dot_n<const N: usize>(u: &[f64; N], v: &[f64; N]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

pub(crate) fn norm_n<const N: usize>(u: &[f64; N]) -> f64 {
    dot_n(u, u).sqrt()
}
