//! Latest-value topic bus.
//!
//! Topics are keyed by the signal path an event carries. Each topic retains
//! the most recent value with its timestamp and a strictly increasing
//! sequence number. Subscribers own a local buffer per topic; publications
//! update the buffers of active subscribers immediately (event-based), and a
//! subscriber activating later is synchronized from the retained value.

use std::collections::BTreeMap;

use serde_json::Value;

use crate::datatypes::Datatype;

use super::SimError;

#[derive(Debug, Clone, PartialEq)]
pub struct Retained {
    pub value: Value,
    pub t_us: u64,
    pub seq: u64,
}

#[derive(Debug, Clone)]
struct SubscriberCell {
    node: String,
    active: bool,
    buffer: Value,
    last_update_us: Option<u64>,
}

#[derive(Debug, Clone)]
struct Topic {
    datatype: Datatype,
    retained: Option<Retained>,
    next_seq: u64,
    subscribers: Vec<SubscriberCell>,
}

#[derive(Debug, Clone, Default)]
pub struct Bus {
    topics: BTreeMap<String, Topic>,
}

impl Bus {
    pub fn new() -> Self {
        Self::default()
    }

    /// Register a topic. Repeated registration with the same datatype is a
    /// no-op; a conflicting datatype is an error.
    pub fn register_topic(&mut self, path: &str, datatype: &Datatype) -> Result<(), SimError> {
        match self.topics.get(path) {
            Some(topic) if &topic.datatype == datatype => Ok(()),
            Some(_) => Err(SimError::TopicDatatypeConflict(path.to_string())),
            None => {
                self.topics.insert(
                    path.to_string(),
                    Topic {
                        datatype: datatype.clone(),
                        retained: None,
                        next_seq: 0,
                        subscribers: Vec::new(),
                    },
                );
                Ok(())
            }
        }
    }

    pub fn has_topic(&self, path: &str) -> bool {
        self.topics.contains_key(path)
    }

    pub fn topic_datatype(&self, path: &str) -> Option<&Datatype> {
        self.topics.get(path).map(|t| &t.datatype)
    }

    /// Register a node's subscription. The buffer starts at the datatype
    /// default and stays inert until the node is activated.
    pub fn subscribe(&mut self, node: &str, path: &str) -> Result<(), SimError> {
        let topic = self
            .topics
            .get_mut(path)
            .ok_or_else(|| SimError::UnknownEvent(path.to_string()))?;
        if topic.subscribers.iter().any(|s| s.node == node) {
            return Ok(());
        }
        let buffer = topic.datatype.default_value();
        topic.subscribers.push(SubscriberCell {
            node: node.to_string(),
            active: false,
            buffer,
            last_update_us: None,
        });
        Ok(())
    }

    /// Toggle delivery for all of a node's subscriptions. Activation copies
    /// the retained value into the local buffer so a late joiner still sees
    /// the last value published before it went active.
    pub fn set_subscriber_active(&mut self, node: &str, active: bool) {
        for topic in self.topics.values_mut() {
            let retained = topic.retained.clone();
            for cell in topic.subscribers.iter_mut().filter(|s| s.node == node) {
                cell.active = active;
                if active {
                    if let Some(retained) = &retained {
                        cell.buffer = retained.value.clone();
                        cell.last_update_us = Some(retained.t_us);
                    }
                }
            }
        }
    }

    /// Publish a value: replace the retained value, bump the sequence number,
    /// and update every active subscriber's buffer.
    pub fn publish(&mut self, path: &str, value: Value, t_us: u64) -> Result<u64, SimError> {
        let topic = self
            .topics
            .get_mut(path)
            .ok_or_else(|| SimError::UnknownEvent(path.to_string()))?;
        if !topic.datatype.accepts(&value) {
            return Err(SimError::DatatypeMismatch {
                topic: path.to_string(),
                value: value.to_string(),
            });
        }
        topic.next_seq += 1;
        let seq = topic.next_seq;
        topic.retained = Some(Retained {
            value: value.clone(),
            t_us,
            seq,
        });
        for cell in topic.subscribers.iter_mut().filter(|s| s.active) {
            cell.buffer = value.clone();
            cell.last_update_us = Some(t_us);
        }
        Ok(seq)
    }

    pub fn retained(&self, path: &str) -> Option<&Retained> {
        self.topics.get(path).and_then(|t| t.retained.as_ref())
    }

    /// Current buffer value of a node's subscription.
    pub fn buffer(&self, node: &str, path: &str) -> Option<&Value> {
        self.topics.get(path).and_then(|t| {
            t.subscribers
                .iter()
                .find(|s| s.node == node)
                .map(|s| &s.buffer)
        })
    }

    /// Timestamp of the last publication on a topic.
    pub fn last_publication_us(&self, path: &str) -> Option<u64> {
        self.retained(path).map(|r| r.t_us)
    }
}
