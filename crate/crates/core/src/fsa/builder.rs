use super::instance::{InstanceError, RawEvent, RawInstance, RawObserver};
use super::{Fsa, Instance};

/// Programmatic construction through the same validation as instance files.
#[derive(Debug, Clone, Default)]
pub struct FsaBuilder {
    raw: RawInstance,
}

impl FsaBuilder {
    pub fn state(mut self, name: &str) -> Self {
        self.raw.states.push(name.to_string());
        self
    }

    pub fn states<'a>(mut self, names: impl IntoIterator<Item = &'a str>) -> Self {
        self.raw.states.extend(names.into_iter().map(str::to_string));
        self
    }

    pub fn event(mut self, name: &str, label: Option<&str>) -> Self {
        self.raw.events.push(RawEvent { name: name.to_string(), label: label.map(str::to_string) });
        self
    }

    /// Events whose label equals their name.
    pub fn observable<'a>(mut self, names: impl IntoIterator<Item = &'a str>) -> Self {
        for n in names {
            self = self.event(n, Some(n));
        }
        self
    }

    pub fn unobservable<'a>(mut self, names: impl IntoIterator<Item = &'a str>) -> Self {
        for n in names {
            self = self.event(n, None);
        }
        self
    }

    pub fn initial<'a>(mut self, names: impl IntoIterator<Item = &'a str>) -> Self {
        self.raw.initial.extend(names.into_iter().map(str::to_string));
        self
    }

    pub fn transition(mut self, src: &str, event: &str, dst: &str) -> Self {
        self.raw.transitions.push((src.to_string(), event.to_string(), dst.to_string()));
        self
    }

    pub fn faulty<'a>(mut self, names: impl IntoIterator<Item = &'a str>) -> Self {
        self.raw.faulty.extend(names.into_iter().map(str::to_string));
        self
    }

    pub fn controllable<'a>(mut self, names: impl IntoIterator<Item = &'a str>) -> Self {
        self.raw.controllable.extend(names.into_iter().map(str::to_string));
        self
    }

    pub fn observer<'a>(mut self, name: &str, observes: impl IntoIterator<Item = &'a str>) -> Self {
        self.raw
            .observers
            .push(RawObserver { name: name.to_string(), observes: observes.into_iter().map(str::to_string).collect() });
        self
    }

    pub fn build(self) -> Result<Fsa, InstanceError> {
        Ok(self.raw.validate()?.fsa)
    }

    pub fn build_instance(self) -> Result<Instance, InstanceError> {
        self.raw.validate()
    }

    pub fn raw(&self) -> &RawInstance {
        &self.raw
    }
}
