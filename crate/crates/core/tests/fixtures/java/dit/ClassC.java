package test.dit;

public class ClassC extends ClassB {
}
