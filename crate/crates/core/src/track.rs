//! Trajectories with per-frame positions and parent links for divisions.

use std::collections::HashMap;

use crate::{Point, Result};

/// One observation of a track: frame index plus position in pixels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackPoint {
    pub frame: usize,
    pub x: f32,
    pub y: f32,
}

/// A single trajectory. Points are consecutive in frame index; `parent_id`
/// links a daughter track to the track it divided from.
#[derive(Debug, Clone, PartialEq)]
pub struct Track {
    pub id: u32,
    pub parent_id: Option<u32>,
    pub points: Vec<TrackPoint>,
}

impl Track {
    pub fn new(id: u32, parent_id: Option<u32>) -> Self {
        Track {
            id,
            parent_id,
            points: Vec::new(),
        }
    }

    pub fn first_frame(&self) -> Option<usize> {
        self.points.first().map(|p| p.frame)
    }

    pub fn last_frame(&self) -> Option<usize> {
        self.points.last().map(|p| p.frame)
    }

    /// Position at `frame`, if the track covers it.
    pub fn at(&self, frame: usize) -> Option<Point> {
        let first = self.first_frame()?;
        if frame < first || frame > self.last_frame()? {
            return None;
        }
        let p = self.points[frame - first];
        debug_assert_eq!(p.frame, frame);
        Some((p.x, p.y))
    }
}

/// A set of trajectories with unique ids and acyclic parent links.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrackSet {
    pub tracks: Vec<Track>,
}

/// One ground-truth or predicted frame-to-frame link: a position at `frame`
/// continuing (or dividing) to a position at `frame + stride`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Link {
    pub frame: usize,
    pub from: Point,
    pub to: Point,
    /// True when the link crosses a division (mother at `frame`, child after).
    pub division: bool,
}

impl TrackSet {
    pub fn new(tracks: Vec<Track>) -> Self {
        TrackSet { tracks }
    }

    pub fn is_empty(&self) -> bool {
        self.tracks.iter().all(|t| t.points.is_empty())
    }

    /// Largest frame index covered by any track.
    pub fn max_frame(&self) -> Option<usize> {
        self.tracks.iter().filter_map(|t| t.last_frame()).max()
    }

    /// All points present at `frame`, with their track ids.
    pub fn points_at(&self, frame: usize) -> Vec<(u32, Point)> {
        self.tracks
            .iter()
            .filter_map(|t| t.at(frame).map(|p| (t.id, p)))
            .collect()
    }

    pub fn get(&self, id: u32) -> Option<&Track> {
        self.tracks.iter().find(|t| t.id == id)
    }

    /// Every (t -> t + stride) same-target position pair, divisions included:
    /// a track born within the window is traced back through its parent chain
    /// to the position the ancestor held at `t`.
    pub fn links(&self, stride: usize) -> Vec<Link> {
        let mut out = Vec::new();
        let Some(max_frame) = self.max_frame() else {
            return out;
        };
        for t in 0..max_frame.saturating_sub(stride - 1) {
            let t1 = t + stride;
            if t1 > max_frame {
                break;
            }
            for track in &self.tracks {
                let Some(to) = track.at(t1) else { continue };
                match self.trace_back(track, t) {
                    Some((from, division)) => out.push(Link {
                        frame: t,
                        from,
                        to,
                        division,
                    }),
                    None => {}
                }
            }
        }
        out
    }

    /// Follows `track`'s parent chain until a position at `frame` is found.
    /// Returns the position and whether a division was crossed.
    fn trace_back(&self, track: &Track, frame: usize) -> Option<(Point, bool)> {
        let mut current = track;
        let mut crossed_division = false;
        loop {
            if let Some(p) = current.at(frame) {
                return Some((p, crossed_division));
            }
            if current.first_frame()? <= frame {
                return None; // track exists at earlier frames but has a gap
            }
            let parent_id = current.parent_id?;
            current = self.get(parent_id)?;
            crossed_division = true;
        }
    }

    /// Keeps every `stride`-th frame (0, stride, 2*stride, ...) and re-indexes
    /// the kept frames consecutively. Tracks left with no points are dropped;
    /// a parent link survives only if the parent keeps at least one point.
    pub fn subsample(&self, stride: usize) -> TrackSet {
        assert!(stride >= 1);
        let mut kept: Vec<Track> = Vec::new();
        for track in &self.tracks {
            let points: Vec<TrackPoint> = track
                .points
                .iter()
                .filter(|p| p.frame % stride == 0)
                .map(|p| TrackPoint {
                    frame: p.frame / stride,
                    ..*p
                })
                .collect();
            if !points.is_empty() {
                kept.push(Track {
                    id: track.id,
                    parent_id: track.parent_id,
                    points,
                });
            }
        }
        let surviving: HashMap<u32, ()> = kept.iter().map(|t| (t.id, ())).collect();
        for track in &mut kept {
            // Re-parent through dropped ancestors so divisions stay linked.
            let mut pid = track.parent_id;
            while let Some(id) = pid {
                if surviving.contains_key(&id) {
                    break;
                }
                pid = self.get(id).and_then(|t| t.parent_id);
            }
            track.parent_id = pid;
        }
        TrackSet { tracks: kept }
    }

    /// Validates id uniqueness, frame-consecutive points and acyclic parents.
    pub fn validate(&self) -> Result<()> {
        let mut seen = HashMap::new();
        for track in &self.tracks {
            if seen.insert(track.id, ()).is_some() {
                return Err(crate::Error::Input(format!(
                    "duplicate track id {}",
                    track.id
                )));
            }
            for pair in track.points.windows(2) {
                if pair[1].frame != pair[0].frame + 1 {
                    return Err(crate::Error::Input(format!(
                        "track {} has non-consecutive frames {} -> {}",
                        track.id, pair[0].frame, pair[1].frame
                    )));
                }
            }
        }
        for track in &self.tracks {
            let mut hops = 0usize;
            let mut current = track;
            while let Some(pid) = current.parent_id {
                if pid == track.id || hops > self.tracks.len() {
                    return Err(crate::Error::Input(format!(
                        "cyclic parent chain at track {}",
                        track.id
                    )));
                }
                match self.get(pid) {
                    Some(parent) => current = parent,
                    None => {
                        return Err(crate::Error::Input(format!(
                            "track {} references missing parent {}",
                            track.id, pid
                        )))
                    }
                }
                hops += 1;
            }
        }
        Ok(())
    }
}
